//! Instance generators: geometric containment systems (disks and squares
//! over points, points piercing boxes), the one-set instance whose LP value
//! collapses to 1/n, and random systems for fuzzing. Everything is
//! deterministic given the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::core::{covered_profit, Error, PscInstance, Result, SetSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Disks,
    UnitSquares,
    RectPierce,
    Pathological,
    Random,
}

impl std::str::FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "disks" => Ok(GenKind::Disks),
            "unit-squares" | "unit_squares" => Ok(GenKind::UnitSquares),
            "rect-pierce" | "rect_pierce" => Ok(GenKind::RectPierce),
            "pathological" => Ok(GenKind::Pathological),
            "random" => Ok(GenKind::Random),
            other => Err(format!("unknown generator kind '{}'", other)),
        }
    }
}

/// Value distribution for weights and profits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    Unit,
    Uniform { lo: f64, hi: f64 },
}

impl Dist {
    fn draw(&self, rng: &mut ChaCha20Rng) -> f64 {
        match *self {
            Dist::Unit => 1.0,
            Dist::Uniform { lo, hi } => {
                if lo == hi {
                    lo
                } else {
                    rng.gen_range(lo..hi)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Dist::Uniform { lo, hi } = *self {
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "bad uniform range [{}, {}]",
                    lo, hi
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub kind: GenKind,
    pub elements: usize,
    pub sets: usize,
    /// Disk radii or square sides are drawn from this range.
    pub size_range: (f64, f64),
    /// Membership probability for `Random`.
    pub density: f64,
    pub seed: u64,
    /// The requirement is this fraction of the coverable profit.
    pub fraction: f64,
    pub weights: Dist,
    pub profits: Dist,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            kind: GenKind::Random,
            elements: 10,
            sets: 6,
            size_range: (0.1, 0.35),
            density: 0.3,
            seed: 0,
            fraction: 0.5,
            weights: Dist::Unit,
            profits: Dist::Unit,
        }
    }
}

impl GenSpec {
    fn validate(&self) -> Result<()> {
        if self.elements < 1 || self.sets < 1 {
            return Err(Error::InvalidArgument("counts must be at least 1".into()));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "fraction {} outside (0, 1]",
                self.fraction
            )));
        }
        let (lo, hi) = self.size_range;
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
            return Err(Error::InvalidArgument(format!("bad size range [{}, {}]", lo, hi)));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidArgument(format!("density {} outside [0,1]", self.density)));
        }
        self.weights.validate()?;
        self.profits.validate()
    }
}

pub fn generate(spec: &GenSpec) -> Result<PscInstance> {
    spec.validate()?;
    match spec.kind {
        GenKind::Disks => gen_disks(spec),
        GenKind::UnitSquares => gen_unit_squares(spec),
        GenKind::RectPierce => gen_rect_pierce(spec),
        GenKind::Pathological => gen_pathological(spec.elements),
        GenKind::Random => gen_random(spec),
    }
}

/// Requirement derived from the coverable profit, so generated instances are
/// feasible by construction. Integral when profits are all ones.
fn derive_requirement(system: &SetSystem, fraction: f64) -> f64 {
    let all: Vec<usize> = (0..system.n_sets()).collect();
    let coverable = covered_profit(system, &all).expect("indices valid");
    if system.has_unit_profits() {
        (fraction * coverable).ceil()
    } else {
        fraction * coverable
    }
}

fn assemble(
    spec: &GenSpec,
    sets: Vec<Vec<usize>>,
    rng: &mut ChaCha20Rng,
    force_unit_weights: bool,
) -> Result<PscInstance> {
    let weights: Vec<f64> = (0..spec.sets)
        .map(|_| if force_unit_weights { 1.0 } else { spec.weights.draw(rng) })
        .collect();
    let profits: Vec<f64> = (0..spec.elements).map(|_| spec.profits.draw(rng)).collect();
    let system = SetSystem::with_profits(spec.elements, sets, weights, profits)?;
    let requirement = derive_requirement(&system, spec.fraction);
    PscInstance::new(system, requirement)
}

/// Points in the unit square covered by random disks; containment is closed,
/// so boundary points count.
pub fn gen_disks(spec: &GenSpec) -> Result<PscInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let points: Vec<(f64, f64)> =
        (0..spec.elements).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let (lo, hi) = spec.size_range;
    let mut sets = Vec::with_capacity(spec.sets);
    for _ in 0..spec.sets {
        let cx: f64 = rng.gen();
        let cy: f64 = rng.gen();
        let r = if lo == hi { lo } else { rng.gen_range(lo..hi) };
        let members: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, &(px, py))| {
                let dx = px - cx;
                let dy = py - cy;
                dx * dx + dy * dy <= r * r
            })
            .map(|(j, _)| j)
            .collect();
        sets.push(members);
    }
    assemble(spec, sets, &mut rng, false)
}

/// Same containment kernel as disks, with axis-parallel squares.
pub fn gen_unit_squares(spec: &GenSpec) -> Result<PscInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let points: Vec<(f64, f64)> =
        (0..spec.elements).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let (lo, hi) = spec.size_range;
    let mut sets = Vec::with_capacity(spec.sets);
    for _ in 0..spec.sets {
        let cx: f64 = rng.gen();
        let cy: f64 = rng.gen();
        let side = if lo == hi { lo } else { rng.gen_range(lo..hi) };
        let half = side / 2.0;
        let members: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, &(px, py))| (px - cx).abs() <= half && (py - cy).abs() <= half)
            .map(|(j, _)| j)
            .collect();
        sets.push(members);
    }
    assemble(spec, sets, &mut rng, false)
}

/// Elements are random axis-parallel boxes in the unit cube; each set is the
/// boxes pierced by one random point. Weights are all ones (cardinality
/// objective).
pub fn gen_rect_pierce(spec: &GenSpec) -> Result<PscInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let boxes: Vec<[(f64, f64); 3]> = (0..spec.elements)
        .map(|_| {
            let mut b = [(0.0, 0.0); 3];
            for side in b.iter_mut() {
                let a: f64 = rng.gen();
                let c: f64 = rng.gen();
                *side = (a.min(c), a.max(c));
            }
            b
        })
        .collect();
    let mut sets = Vec::with_capacity(spec.sets);
    for _ in 0..spec.sets {
        let p = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        let members: Vec<usize> = boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| (0..3).all(|d| b[d].0 <= p[d] && p[d] <= b[d].1))
            .map(|(j, _)| j)
            .collect();
        sets.push(members);
    }
    assemble(spec, sets, &mut rng, true)
}

/// One unit-weight set equal to the whole ground set, requirement 1. The LP
/// spreads mass to value 1/n while any integral cover costs 1.
pub fn gen_pathological(n: usize) -> Result<PscInstance> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    let system = SetSystem::new(n, vec![(0..n).collect()], vec![1.0])?;
    PscInstance::new(system, 1.0)
}

/// Independent membership with probability `density`.
pub fn gen_random(spec: &GenSpec) -> Result<PscInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut sets = Vec::with_capacity(spec.sets);
    for _ in 0..spec.sets {
        let members: Vec<usize> =
            (0..spec.elements).filter(|_| rng.gen::<f64>() < spec.density).collect();
        sets.push(members);
    }
    assemble(spec, sets, &mut rng, false)
}
