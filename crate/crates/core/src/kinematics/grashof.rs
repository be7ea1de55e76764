use serde::{Deserialize, Serialize};

/// Bar lengths of a four-bar driven at the crank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourBarLengths {
    pub ground: f64,
    pub crank: f64,
    pub coupler: f64,
    pub rocker: f64,
}

impl FourBarLengths {
    pub fn new(ground: f64, crank: f64, coupler: f64, rocker: f64) -> Self {
        Self { ground, crank, coupler, rocker }
    }

    /// (s + l) - (p + q); negative means Grashof.
    pub fn grashof_margin(&self) -> f64 {
        let mut l = [self.ground, self.crank, self.coupler, self.rocker];
        l.sort_by(f64::total_cmp);
        (l[0] + l[3]) - (l[1] + l[2])
    }
}

/// Grashof type relative to the driven crank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrashofClass {
    /// Shortest link is the crank: the input turns fully, the rocker oscillates.
    CrankRocker,
    /// Shortest link is the ground: both grounded links turn fully.
    DoubleCrank,
    /// Shortest link is the coupler.
    DoubleRocker,
    /// Shortest link is the rocker: only the output could turn fully, so the
    /// driven crank cannot.
    RockerCrank,
    NonGrashof,
    /// s + l = p + q; the linkage can fold flat.
    ChangePoint,
}

impl GrashofClass {
    /// Can the crank complete a revolution (ignoring the folded pose of
    /// change-point linkages)?
    pub fn crank_rotates(self) -> bool {
        matches!(self, GrashofClass::CrankRocker | GrashofClass::DoubleCrank | GrashofClass::ChangePoint)
    }
}

/// Relative tolerance for the change-point equality.
const CHANGE_POINT_TOL: f64 = 1e-12;

pub fn grashof_class(l: FourBarLengths) -> GrashofClass {
    let total = l.ground + l.crank + l.coupler + l.rocker;
    let margin = l.grashof_margin();
    if margin.abs() <= CHANGE_POINT_TOL * total {
        return GrashofClass::ChangePoint;
    }
    if margin > 0.0 {
        return GrashofClass::NonGrashof;
    }
    let shortest = [l.ground, l.crank, l.coupler, l.rocker]
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("four lengths");
    match shortest {
        0 => GrashofClass::DoubleCrank,
        1 => GrashofClass::CrankRocker,
        2 => GrashofClass::DoubleRocker,
        _ => GrashofClass::RockerCrank,
    }
}
