//! Leggett-Garg-type parameters, their correlation-matrix bounds, and margin
//! reports.
//!
//! For four measurements `Q1..Q4` the LGI parameter is
//! `L = |C12 + C23 + C34 - C14|`. The PSD 3x3 matrices on `{Q2, Q1, Q3}`,
//! `{Q4, Q1, Q3}` (pivoting on `Q2` or `Q4`) and on `{Q1, Q4, Q2}`,
//! `{Q3, Q4, Q2}` give four two-term inequalities whose triangle-inequality
//! combination is
//!
//! ```text
//! L <= 2 sqrt(1 + sqrt(1 - max(C13^2, C24^2)))
//! ```
//!
//! The complementarity form follows from `sqrt(1 - a) <= 1 - a/2`: each
//! single-matrix bound gives `L^2 + 2 C13^2 <= 8` (resp. `C24`), and adding
//! the two and dividing by 16 yields
//! `(L^2 + C13^2 + C24^2) / 8 <= 1`.
//!
//! Raw-correlation entry points only check ranges. Joint realizability is
//! guaranteed solely by [`evaluate_schedule`] and [`evaluate_bipartite`].

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::correlation::{build_from_centered, psd_check, schur_complement_check, Centered};
use crate::correlation::{CorrelationMatrix, PsdCheck, SchurCheck, PSD_TOL};
use crate::error::{Error, Result};
use crate::operator::{
    tensor_lift, DensityMatrix, Hamiltonian, HermitianOperator, Propagator, Slot,
};

/// Margins down to `-REPORT_TOL` count as satisfied.
pub const REPORT_TOL: f64 = 1e-9;
/// Absolute tolerance for the complex equalities guarding the appendix bounds.
pub const PRECONDITION_TOL: f64 = 1e-9;

/// `2 sqrt(2)`.
pub const TSIRELSON: f64 = 2.0 * SQRT_2;

fn check_corr(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value.abs() <= 1.0 {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

fn check_complex(name: &'static str, value: Complex64) -> Result<Complex64> {
    let modulus = value.norm();
    if modulus.is_finite() && modulus <= 1.0 + 1e-9 {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value: modulus,
        })
    }
}

/// `2 sqrt(1 + sqrt(1 - m))` for `m` in `[0, 1]`.
fn nested_bound(m: f64) -> f64 {
    2.0 * (1.0 + (1.0 - m).max(0.0).sqrt()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `L` against the nested square-root bound.
    Theorem1,
    /// `|C12 + C23| <= sqrt(2(1 + C13))`, pivot `Q2`.
    Intermediate13Plus,
    /// `|C34 - C14| <= sqrt(2(1 - C13))`, pivot `Q4`.
    Intermediate13Minus,
    /// `|C12 - C14| <= sqrt(2(1 - C24))`, pivot `Q1`.
    Intermediate24Minus,
    /// `|C23 + C34| <= sqrt(2(1 + C24))`, pivot `Q3`.
    Intermediate24Plus,
    /// Determinant form of one 3x3 correlation matrix.
    TlmSingle,
    /// Product (TLM) form.
    Theorem2,
    /// Complementarity relation.
    Theorem3,
    /// Bipartite Bell-Leggett-Garg bound.
    Theorem4,
    /// Complex-valued `L` against the real-part bound.
    AppendixBound,
    /// Complex-valued complementarity relation.
    AppendixComplementarity,
}

/// Evaluated inequality: `margin = rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
    /// False when a precondition failed; `satisfied` then carries no claim.
    pub applicable: bool,
    pub inputs: Vec<(&'static str, f64)>,
}

impl BoundReport {
    pub fn new(name: InequalityId, lhs: f64, rhs: f64, inputs: Vec<(&'static str, f64)>) -> Self {
        let margin = rhs - lhs;
        Self {
            name,
            lhs,
            rhs,
            margin,
            satisfied: margin >= -REPORT_TOL,
            applicable: true,
            inputs,
        }
    }

    pub fn not_applicable(
        name: InequalityId,
        lhs: f64,
        rhs: f64,
        inputs: Vec<(&'static str, f64)>,
    ) -> Self {
        Self {
            satisfied: false,
            applicable: false,
            ..Self::new(name, lhs, rhs, inputs)
        }
    }

    /// Applicable and within `REPORT_TOL` of equality.
    pub fn is_boundary(&self) -> bool {
        self.applicable && self.margin.abs() <= REPORT_TOL
    }

    pub fn is_violation(&self) -> bool {
        self.applicable && !self.satisfied
    }
}

/// The six pairwise correlations of four measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LgiCorrelations {
    pub c12: f64,
    pub c23: f64,
    pub c34: f64,
    pub c14: f64,
    pub c13: f64,
    pub c24: f64,
}

impl LgiCorrelations {
    pub fn validate(&self) -> Result<()> {
        check_corr("c12", self.c12)?;
        check_corr("c23", self.c23)?;
        check_corr("c34", self.c34)?;
        check_corr("c14", self.c14)?;
        check_corr("c13", self.c13)?;
        check_corr("c24", self.c24)?;
        Ok(())
    }

    fn echo(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("c12", self.c12),
            ("c23", self.c23),
            ("c34", self.c34),
            ("c14", self.c14),
            ("c13", self.c13),
            ("c24", self.c24),
        ]
    }
}

pub(crate) fn lgi_value(c: &LgiCorrelations) -> f64 {
    (c.c12 + c.c23 + c.c34 - c.c14).abs()
}

pub(crate) fn theorem1_value(c13: f64, c24: f64) -> f64 {
    nested_bound((c13 * c13).max(c24 * c24))
}

/// `L = |C12 + C23 + C34 - C14|`.
pub fn lgi_parameter(c: &LgiCorrelations) -> Result<f64> {
    c.validate()?;
    Ok(lgi_value(c))
}

/// `2 sqrt(1 + sqrt(1 - max(C13^2, C24^2)))`, between 2 and `2 sqrt(2)`.
pub fn theorem1_bound(c13: f64, c24: f64) -> Result<f64> {
    check_corr("c13", c13)?;
    check_corr("c24", c24)?;
    Ok(theorem1_value(c13, c24))
}

pub fn theorem1_check(c: &LgiCorrelations) -> Result<BoundReport> {
    c.validate()?;
    Ok(BoundReport::new(
        InequalityId::Theorem1,
        lgi_value(c),
        theorem1_value(c.c13, c.c24),
        c.echo(),
    ))
}

/// The four two-term proof inequalities, in the order
/// `[13 plus, 13 minus, 24 minus, 24 plus]`.
pub fn intermediate_bounds(c: &LgiCorrelations) -> Result<[BoundReport; 4]> {
    c.validate()?;
    let root = |x: f64| (2.0 * x).max(0.0).sqrt();
    let inputs = c.echo();
    Ok([
        BoundReport::new(
            InequalityId::Intermediate13Plus,
            (c.c12 + c.c23).abs(),
            root(1.0 + c.c13),
            inputs.clone(),
        ),
        BoundReport::new(
            InequalityId::Intermediate13Minus,
            (c.c34 - c.c14).abs(),
            root(1.0 - c.c13),
            inputs.clone(),
        ),
        BoundReport::new(
            InequalityId::Intermediate24Minus,
            (c.c12 - c.c14).abs(),
            root(1.0 - c.c24),
            inputs.clone(),
        ),
        BoundReport::new(
            InequalityId::Intermediate24Plus,
            (c.c23 + c.c34).abs(),
            root(1.0 + c.c24),
            inputs,
        ),
    ])
}

/// `|C13 - C_s1 C_s3| <= sqrt((1 - C_s1^2)(1 - C_s3^2))` for one pivot `s`.
pub fn tlm_single_check(c_shared1: f64, c_shared3: f64, c13: f64) -> Result<BoundReport> {
    check_corr("c_shared1", c_shared1)?;
    check_corr("c_shared3", c_shared3)?;
    check_corr("c13", c13)?;
    Ok(BoundReport::new(
        InequalityId::TlmSingle,
        (c13 - c_shared1 * c_shared3).abs(),
        ((1.0 - c_shared1 * c_shared1) * (1.0 - c_shared3 * c_shared3))
            .max(0.0)
            .sqrt(),
        vec![
            ("c_shared1", c_shared1),
            ("c_shared3", c_shared3),
            ("c13", c13),
        ],
    ))
}

/// `|C21 C23 - C41 C43| <= sqrt((1-C21^2)(1-C23^2)) + sqrt((1-C41^2)(1-C43^2))`.
pub fn tlm_check(c21: f64, c23: f64, c41: f64, c43: f64) -> Result<BoundReport> {
    check_corr("c21", c21)?;
    check_corr("c23", c23)?;
    check_corr("c41", c41)?;
    check_corr("c43", c43)?;
    let side = |a: f64, b: f64| ((1.0 - a * a) * (1.0 - b * b)).max(0.0).sqrt();
    Ok(BoundReport::new(
        InequalityId::Theorem2,
        (c21 * c23 - c41 * c43).abs(),
        side(c21, c23) + side(c41, c43),
        vec![("c21", c21), ("c23", c23), ("c41", c41), ("c43", c43)],
    ))
}

/// `(L / 2√2)^2 + (C13 / 2√2)^2 + (C24 / 2√2)^2 <= 1`.
pub fn complementarity_check(l: f64, c13: f64, c24: f64) -> Result<BoundReport> {
    if !(0.0..=4.0).contains(&l) {
        return Err(Error::OutOfRange {
            name: "L",
            value: l,
        });
    }
    check_corr("c13", c13)?;
    check_corr("c24", c24)?;
    Ok(BoundReport::new(
        InequalityId::Theorem3,
        (l * l + c13 * c13 + c24 * c24) / 8.0,
        1.0,
        vec![("L", l), ("c13", c13), ("c24", c24)],
    ))
}

/// Correlations between Alice's `A1, A2` and Bob's `B1, B2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlgCorrelations {
    pub c_a1a2: f64,
    pub c_a1b2: f64,
    pub c_b1b2: f64,
    pub c_b1a2: f64,
    pub c_a1b1: f64,
    pub c_a2b2: f64,
}

impl BlgCorrelations {
    pub fn validate(&self) -> Result<()> {
        check_corr("c_a1a2", self.c_a1a2)?;
        check_corr("c_a1b2", self.c_a1b2)?;
        check_corr("c_b1b2", self.c_b1b2)?;
        check_corr("c_b1a2", self.c_b1a2)?;
        check_corr("c_a1b1", self.c_a1b1)?;
        check_corr("c_a2b2", self.c_a2b2)?;
        Ok(())
    }

    fn echo(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("c_a1a2", self.c_a1a2),
            ("c_a1b2", self.c_a1b2),
            ("c_b1b2", self.c_b1b2),
            ("c_b1a2", self.c_b1a2),
            ("c_a1b1", self.c_a1b1),
            ("c_a2b2", self.c_a2b2),
        ]
    }
}

/// `BLG = |C(A1,A2) + C(A1,B2) + C(B1,B2) - C(B1,A2)|`.
pub fn blg_parameter(c: &BlgCorrelations) -> Result<f64> {
    c.validate()?;
    Ok((c.c_a1a2 + c.c_a1b2 + c.c_b1b2 - c.c_b1a2).abs())
}

/// `2 sqrt(1 + sqrt(1 - max(C(A1,B1)^2, C(A2,B2)^2)))`.
pub fn theorem4_bound(c_a1b1: f64, c_a2b2: f64) -> Result<f64> {
    check_corr("c_a1b1", c_a1b1)?;
    check_corr("c_a2b2", c_a2b2)?;
    Ok(nested_bound((c_a1b1 * c_a1b1).max(c_a2b2 * c_a2b2)))
}

pub fn theorem4_check(c: &BlgCorrelations) -> Result<BoundReport> {
    Ok(BoundReport::new(
        InequalityId::Theorem4,
        blg_parameter(c)?,
        theorem4_bound(c.c_a1b1, c.c_a2b2)?,
        c.echo(),
    ))
}

/// Complex correlations entering the complex-valued LGI parameter, with the
/// reverse-order values its precondition compares against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexLgiCorrelations {
    pub c12: Complex64,
    pub c21: Complex64,
    pub c23: Complex64,
    pub c32: Complex64,
    pub c34: Complex64,
    pub c43: Complex64,
    pub c14: Complex64,
    pub c13: Complex64,
    pub c42: Complex64,
}

impl ComplexLgiCorrelations {
    /// Real correlations embedded with symmetric reverse-order values.
    pub fn from_real(c: &LgiCorrelations) -> Self {
        let z = |v: f64| Complex64::new(v, 0.0);
        Self {
            c12: z(c.c12),
            c21: z(c.c12),
            c23: z(c.c23),
            c32: z(c.c23),
            c34: z(c.c34),
            c43: z(c.c34),
            c14: z(c.c14),
            c13: z(c.c13),
            c42: z(c.c24),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c12", self.c12),
            ("c21", self.c21),
            ("c23", self.c23),
            ("c32", self.c32),
            ("c34", self.c34),
            ("c43", self.c43),
            ("c14", self.c14),
            ("c13", self.c13),
            ("c42", self.c42),
        ] {
            check_complex(name, v)?;
        }
        Ok(())
    }

    /// `C23 = C32`, or both `C12 = C21` and `C34 = C43`.
    pub fn precondition_met(&self) -> bool {
        let eq = |a: Complex64, b: Complex64| (a - b).norm() <= PRECONDITION_TOL;
        eq(self.c23, self.c32) || (eq(self.c12, self.c21) && eq(self.c34, self.c43))
    }

    /// `|C12 + C23 + C34 - C14|`.
    pub fn lgi(&self) -> f64 {
        (self.c12 + self.c23 + self.c34 - self.c14).norm()
    }

    fn echo(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("c12_re", self.c12.re),
            ("c12_im", self.c12.im),
            ("c23_re", self.c23.re),
            ("c23_im", self.c23.im),
            ("c34_re", self.c34.re),
            ("c34_im", self.c34.im),
            ("c14_re", self.c14.re),
            ("c14_im", self.c14.im),
            ("c13_re", self.c13.re),
            ("c42_re", self.c42.re),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexLgiOutcome {
    pub precondition_met: bool,
    pub bound: BoundReport,
    pub complementarity: BoundReport,
}

/// The complex-valued analogues of the nested bound and the complementarity
/// relation. Reports are flagged not applicable when the symmetry
/// precondition fails.
pub fn complex_lgi_bounds(c: &ComplexLgiCorrelations) -> Result<ComplexLgiOutcome> {
    c.validate()?;
    let l = c.lgi();
    let (r13, r42) = (c.c13.re, c.c42.re);
    let bound_rhs = nested_bound((r13 * r13).max(r42 * r42));
    let comp_lhs = (l * l + r13 * r13 + r42 * r42) / 8.0;
    let met = c.precondition_met();
    let make = if met {
        BoundReport::new
    } else {
        BoundReport::not_applicable
    };
    Ok(ComplexLgiOutcome {
        precondition_met: met,
        bound: make(InequalityId::AppendixBound, l, bound_rhs, c.echo()),
        complementarity: make(
            InequalityId::AppendixComplementarity,
            comp_lhs,
            1.0,
            c.echo(),
        ),
    })
}

/// Every report for one four-time measurement schedule.
#[derive(Debug, Clone, Serialize)]
pub struct ScheduleEvaluation {
    pub times: [f64; 4],
    pub correlations: LgiCorrelations,
    /// `[C(Q_i, Q_j)]` over `Q1..Q4`.
    pub matrix: CorrelationMatrix,
    pub psd: PsdCheck,
    /// Schur complements of the 3x3 matrices pivoted on `Q2`, `Q4`, `Q1`, `Q3`.
    pub schur: Vec<SchurCheck>,
    pub lgi: f64,
    pub theorem1: BoundReport,
    pub intermediates: [BoundReport; 4],
    /// Determinant inequalities pivoted on `Q2` and `Q4`.
    pub tlm_single: [BoundReport; 2],
    pub theorem2: BoundReport,
    pub theorem3: BoundReport,
    pub appendix: ComplexLgiOutcome,
}

impl ScheduleEvaluation {
    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        std::iter::once(&self.theorem1)
            .chain(self.intermediates.iter())
            .chain(self.tlm_single.iter())
            .chain([&self.theorem2, &self.theorem3])
            .chain([&self.appendix.bound, &self.appendix.complementarity])
    }

    pub fn all_satisfied(&self) -> bool {
        self.psd.is_psd && self.reports().all(|r| !r.is_violation())
    }
}

fn sub_matrix(m: &CorrelationMatrix, idx: [usize; 3]) -> CorrelationMatrix {
    let entries = nalgebra::DMatrix::from_fn(3, 3, |a, b| m.get(idx[a], idx[b]));
    CorrelationMatrix::new(entries).expect("principal submatrix of a correlation matrix")
}

/// Evaluates every four-time inequality for `Q` measured at `times` under
/// `H` on `rho`.
pub fn evaluate_schedule(
    rho: &DensityMatrix,
    q: &HermitianOperator,
    h: &Hamiltonian,
    times: [f64; 4],
) -> Result<ScheduleEvaluation> {
    let propagator = Propagator::new(h)?;
    let ops = times
        .iter()
        .map(|&t| propagator.evolve(q, t))
        .collect::<Result<Vec<_>>>()?;
    let centered = ops
        .iter()
        .map(|op| Centered::new(rho, op))
        .collect::<Result<Vec<_>>>()?;
    let matrix = build_from_centered(&centered)?;
    let corr = LgiCorrelations {
        c12: matrix.get(0, 1),
        c23: matrix.get(1, 2),
        c34: matrix.get(2, 3),
        c14: matrix.get(0, 3),
        c13: matrix.get(0, 2),
        c24: matrix.get(1, 3),
    };
    let psd = psd_check(&matrix, PSD_TOL)?;
    let schur = [[1, 0, 2], [3, 0, 2], [0, 3, 1], [2, 3, 1]]
        .into_iter()
        .map(|idx| schur_complement_check(&sub_matrix(&matrix, idx), 0, PSD_TOL))
        .collect::<Result<Vec<_>>>()?;

    let cc = |i: usize, j: usize| -> Result<Complex64> {
        Ok(centered[i].complex_correlation(&centered[j])?.value)
    };
    let complex = ComplexLgiCorrelations {
        c12: cc(0, 1)?,
        c21: cc(1, 0)?,
        c23: cc(1, 2)?,
        c32: cc(2, 1)?,
        c34: cc(2, 3)?,
        c43: cc(3, 2)?,
        c14: cc(0, 3)?,
        c13: cc(0, 2)?,
        c42: cc(3, 1)?,
    };

    let lgi = lgi_value(&corr);
    Ok(ScheduleEvaluation {
        times,
        correlations: corr,
        matrix,
        psd,
        schur,
        lgi,
        theorem1: theorem1_check(&corr)?,
        intermediates: intermediate_bounds(&corr)?,
        tlm_single: [
            tlm_single_check(corr.c12, corr.c23, corr.c13)?,
            tlm_single_check(corr.c14, corr.c34, corr.c13)?,
        ],
        theorem2: tlm_check(corr.c12, corr.c23, corr.c14, corr.c34)?,
        theorem3: complementarity_check(lgi, corr.c13, corr.c24)?,
        appendix: complex_lgi_bounds(&complex)?,
    })
}

/// Alice's two measurements and Bob's two measurements on a shared space.
#[derive(Debug, Clone)]
pub struct BipartiteObservables {
    pub a1: HermitianOperator,
    pub a2: HermitianOperator,
    pub b1: HermitianOperator,
    pub b2: HermitianOperator,
}

impl BipartiteObservables {
    /// Local observables `a` (dim `d_a`) and `b` (dim `d_b`) evolved by local
    /// Hamiltonians, Alice measuring at `times[0..2]` and Bob at `times[2..4]`,
    /// lifted to the `d_a * d_b` product space.
    pub fn from_local_dynamics(
        a: &HermitianOperator,
        h_a: &Hamiltonian,
        b: &HermitianOperator,
        h_b: &Hamiltonian,
        times: [f64; 4],
    ) -> Result<Self> {
        let pa = Propagator::new(h_a)?;
        let pb = Propagator::new(h_b)?;
        let (da, db) = (a.dim(), b.dim());
        let alice = |t| Ok::<_, Error>(tensor_lift(&pa.evolve(a, t)?, Slot::First, db));
        let bob = |t| Ok::<_, Error>(tensor_lift(&pb.evolve(b, t)?, Slot::Second, da));
        Ok(Self {
            a1: alice(times[0])?,
            a2: alice(times[1])?,
            b1: bob(times[2])?,
            b2: bob(times[3])?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BipartiteEvaluation {
    pub correlations: BlgCorrelations,
    /// `[C]` over `A1, A2, B1, B2`.
    pub matrix: CorrelationMatrix,
    pub psd: PsdCheck,
    pub blg: f64,
    pub theorem4: BoundReport,
}

pub fn evaluate_bipartite(
    rho: &DensityMatrix,
    ops: &BipartiteObservables,
) -> Result<BipartiteEvaluation> {
    let centered = [&ops.a1, &ops.a2, &ops.b1, &ops.b2]
        .into_iter()
        .map(|op| Centered::new(rho, op))
        .collect::<Result<Vec<_>>>()?;
    let matrix = build_from_centered(&centered)?;
    let correlations = BlgCorrelations {
        c_a1a2: matrix.get(0, 1),
        c_a1b2: matrix.get(0, 3),
        c_b1b2: matrix.get(2, 3),
        c_b1a2: matrix.get(2, 1),
        c_a1b1: matrix.get(0, 2),
        c_a2b2: matrix.get(1, 3),
    };
    let theorem4 = theorem4_check(&correlations)?;
    Ok(BipartiteEvaluation {
        correlations,
        psd: psd_check(&matrix, PSD_TOL)?,
        matrix,
        blg: theorem4.lhs,
        theorem4,
    })
}
