//! Sufficient conditions for a traveling wave, checked through the row
//! Gershgorin discs of the 4×4 block of the disease-free Jacobian.
//!
//! Rows of the block give four discs:
//!
//! | disc | center   | radius           |
//! |------|----------|------------------|
//! | G1   | −ρ1/c    | 1/c              |
//! | G2   | −ρ3/c    | ρ2/c             |
//! | G3   | 0        | 1                |
//! | G4   | c/Dv     | (ρ4 + ρ5)/Dv     |
//!
//! `ρ1 > 1 + c` and `ρ3 − ρ2 > c` push G1 and G2 left of −1, `c > c*` pushes
//! G4 right of 1, which isolates G3. The checker evaluates the inequalities,
//! verifies the separation geometrically, and cross-checks the expected
//! eigenvalue nature of each group against a numerical eigensolve.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::{
    connected_components, distance_to_union, eigenvalues, gershgorin_discs, strictly_disjoint, Disc, DiscPartition,
};

use super::system::{minimal_wave_speed, submatrix};
use super::WaveParams;

pub const DISC_LABELS: [&str; 4] = ["G1", "G2", "G3", "G4"];

/// Assignment tolerance when locating eigenvalues inside disc unions.
const LOCATE_TOL: f64 = 1e-8;

/// `lhs > rhs`, kept with both sides for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    fn greater(lhs: f64, rhs: f64) -> Self {
        Self {
            holds: lhs > rhs,
            lhs,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenNature {
    /// Exactly one eigenvalue, real and positive.
    PositiveReal,
    /// Exactly one eigenvalue, real and nonzero; sign not fixed by the discs.
    NonzeroReal,
    /// Two eigenvalues, negative reals or a conjugate pair with negative real part.
    StablePair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupClassification {
    /// Zero-based disc indices (0 ↦ G1, …, 3 ↦ G4).
    pub discs: Vec<usize>,
    pub expected: EigenNature,
    pub eigenvalues: Vec<Complex64>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    ClassificationMismatch {
        discs: Vec<usize>,
        expected: EigenNature,
        found: Vec<Complex64>,
    },
    EigenvalueOutsideDiscs {
        value: Complex64,
        distance: f64,
    },
    EigensolveFailed {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub c: f64,
    pub c_star: f64,
    /// `ρ1 > 1 + c`
    pub cond1: Inequality,
    /// `ρ3 − ρ2 > c`
    pub cond2: Inequality,
    /// `c > c* = Dv + ρ4 + ρ5`
    pub cond3: Inequality,
    pub discs: Vec<Disc>,
    pub partition: DiscPartition,
    /// `{G1, G2}`, `{G3}` and `{G4}` pairwise strictly disjoint.
    pub separated: bool,
    pub classification: Vec<GroupClassification>,
    /// Spectrum of the 4×4 block.
    pub eigenvalues: Vec<Complex64>,
    pub determinant: f64,
    /// Eigenvalues of the block with positive real part.
    pub unstable_count: usize,
    pub diagnostics: Vec<Diagnostic>,
    pub overall: bool,
}

const GROUPS: [(&[usize], EigenNature); 3] = [
    (&[0, 1], EigenNature::StablePair),
    (&[2], EigenNature::NonzeroReal),
    (&[3], EigenNature::PositiveReal),
];

pub fn check_existence(wp: &WaveParams) -> ConditionReport {
    let sp = &wp.sp;
    let c = wp.c;
    let c_star = minimal_wave_speed(sp);
    let cond1 = Inequality::greater(sp.rho1, 1.0 + c);
    let cond2 = Inequality::greater(sp.rho3 - sp.rho2, c);
    let cond3 = Inequality::greater(c, c_star);

    let block = submatrix(wp);
    let discs = gershgorin_discs(&block);
    let partition = connected_components(&discs);
    let separated = GROUPS
        .iter()
        .enumerate()
        .all(|(i, (a, _))| GROUPS[i + 1..].iter().all(|(b, _)| strictly_disjoint(&discs, a, b)));

    let mut diagnostics = Vec::new();
    let mut classification = Vec::new();
    let spectrum = match eigenvalues(&block) {
        Ok(ev) => ev,
        Err(e) => {
            diagnostics.push(Diagnostic::EigensolveFailed { message: e.to_string() });
            Vec::new()
        }
    };

    let all: Vec<usize> = (0..discs.len()).collect();
    for z in &spectrum {
        let distance = distance_to_union(&discs, &all, *z);
        if distance > LOCATE_TOL {
            diagnostics.push(Diagnostic::EigenvalueOutsideDiscs { value: *z, distance });
        }
    }

    if separated && !spectrum.is_empty() {
        let mut members: Vec<Vec<Complex64>> = vec![Vec::new(); GROUPS.len()];
        for z in &spectrum {
            let nearest = GROUPS
                .iter()
                .enumerate()
                .map(|(g, (idx, _))| (g, distance_to_union(&discs, idx, *z)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(g, _)| g)
                .unwrap_or(0);
            members[nearest].push(*z);
        }
        for ((idx, nature), found) in GROUPS.iter().zip(members) {
            let consistent = matches_nature(*nature, &found, block.norm_inf());
            if !consistent {
                diagnostics.push(Diagnostic::ClassificationMismatch {
                    discs: idx.to_vec(),
                    expected: *nature,
                    found: found.clone(),
                });
            }
            classification.push(GroupClassification {
                discs: idx.to_vec(),
                expected: *nature,
                eigenvalues: found,
                consistent,
            });
        }
    }

    let unstable_count = spectrum.iter().filter(|z| z.re > 0.0).count();
    let overall = cond1.holds && cond2.holds && cond3.holds && separated;

    ConditionReport {
        c,
        c_star,
        cond1,
        cond2,
        cond3,
        discs,
        partition,
        separated,
        classification,
        eigenvalues: spectrum,
        determinant: block.determinant(),
        unstable_count,
        diagnostics,
        overall,
    }
}

fn matches_nature(nature: EigenNature, found: &[Complex64], scale: f64) -> bool {
    let real_tol = 1e-10 * scale.max(1.0);
    let is_real = |z: &Complex64| z.im.abs() <= real_tol;
    match nature {
        EigenNature::PositiveReal => matches!(found, [z] if is_real(z) && z.re > 0.0),
        EigenNature::NonzeroReal => matches!(found, [z] if is_real(z) && z.re != 0.0),
        EigenNature::StablePair => match found {
            [a, b] if is_real(a) && is_real(b) => a.re < 0.0 && b.re < 0.0,
            [a, b] => a.re < 0.0 && (a.re - b.re).abs() <= real_tol && (a.im + b.im).abs() <= real_tol,
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn reference_set_geometry() {
        let wp = WaveParams::new(presets::reference_wave(), 20.0).unwrap();
        let r = check_existence(&wp);
        assert!(r.cond1.holds && r.cond2.holds && r.cond3.holds);
        assert!(close(r.c_star, 19.6));
        let intervals: Vec<(f64, f64)> = r.discs.iter().map(|d| (d.left(), d.right())).collect();
        let want = [(-1.125, -1.025), (-4.025, -1.025), (-1.0, 1.0), (5.0, 395.0)];
        for ((l, r), (wl, wr)) in intervals.iter().zip(want) {
            assert!(close(*l, wl) && close(*r, wr), "[{l}, {r}] vs [{wl}, {wr}]");
        }
        let radii: Vec<f64> = r.discs.iter().map(|d| d.radius).collect();
        for (got, want) in radii.iter().zip([0.05, 1.5, 1.0, 195.0]) {
            assert!(close(*got, want));
        }
        assert_eq!(r.partition.groups, vec![vec![0, 1], vec![2], vec![3]]);
        assert!(r.separated && r.overall);
        assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    }

    #[test]
    fn quoted_rho_fails_first_condition() {
        let wp = WaveParams::new(presets::paper_rho(), 2.0).unwrap();
        let r = check_existence(&wp);
        assert!(!r.cond1.holds);
        assert_eq!((r.cond1.lhs, r.cond1.rhs), (2.81, 3.0));
        assert!(!r.overall);
    }

    #[test]
    fn slow_speed_fails_third_condition() {
        let sp = presets::reference_wave();
        for c in [0.5, 10.0, 19.6] {
            let r = check_existence(&WaveParams::new(sp, c).unwrap());
            assert!(!r.cond3.holds, "c = {c}");
            assert!(!r.overall);
        }
    }

    #[test]
    fn nature_matching() {
        let re = |x: f64| Complex64::new(x, 0.0);
        assert!(matches_nature(EigenNature::PositiveReal, &[re(3.0)], 1.0));
        assert!(!matches_nature(EigenNature::PositiveReal, &[re(-3.0)], 1.0));
        assert!(!matches_nature(EigenNature::NonzeroReal, &[re(0.0)], 1.0));
        assert!(matches_nature(EigenNature::StablePair, &[re(-1.0), re(-2.0)], 1.0));
        assert!(matches_nature(
            EigenNature::StablePair,
            &[Complex64::new(-1.0, -2.0), Complex64::new(-1.0, 2.0)],
            1.0
        ));
        assert!(!matches_nature(EigenNature::StablePair, &[re(-1.0)], 1.0));
        assert!(!matches_nature(EigenNature::StablePair, &[re(-1.0), re(0.5)], 1.0));
    }
}
