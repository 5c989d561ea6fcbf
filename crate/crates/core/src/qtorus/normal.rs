//! Normal forms coeff * Y_gamma * S for quantum y-variables, and quantum
//! seed mutation.

use super::series::TorusSeries;
use super::{QTorusError, TorusContext};
use crate::cluster::ExchangeMatrix;
use crate::qpoly::QCoeff;
use std::fmt;

/// Quantum torus element in the shape coeff * Y_gamma * S with S a series of
/// unit constant term. Along mutation trajectories coeff stays of the shape
/// +/- q^k and gamma equals the classical c-vector; the coefficient field is
/// nevertheless all of Q(q) so that signed monomial arguments and
/// renormalized sums are representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QYNormalForm {
    coeff: QCoeff,
    gamma: Vec<i64>,
    series: TorusSeries,
}

impl QYNormalForm {
    pub fn new(coeff: QCoeff, gamma: Vec<i64>, series: TorusSeries) -> Self {
        assert!(!coeff.is_zero(), "zero coefficient in normal form");
        assert!(
            series.constant_term().is_one(),
            "normal-form series must have unit constant term"
        );
        QYNormalForm {
            coeff,
            gamma,
            series,
        }
    }

    /// coeff * Y_gamma.
    pub fn monomial(ctx: &TorusContext, coeff: QCoeff, gamma: Vec<i64>) -> Self {
        assert_eq!(gamma.len(), ctx.n());
        QYNormalForm::new(coeff, gamma, TorusSeries::one(ctx.n()))
    }

    pub fn one(ctx: &TorusContext) -> Self {
        QYNormalForm::monomial(ctx, QCoeff::one(), vec![0; ctx.n()])
    }

    /// The i-th generator Y_{e_i}, 1-based.
    pub fn generator(ctx: &TorusContext, i: usize) -> Self {
        assert!(i >= 1 && i <= ctx.n());
        let mut gamma = vec![0; ctx.n()];
        gamma[i - 1] = 1;
        QYNormalForm::monomial(ctx, QCoeff::one(), gamma)
    }

    pub fn coeff(&self) -> &QCoeff {
        &self.coeff
    }

    pub fn gamma(&self) -> &[i64] {
        &self.gamma
    }

    pub fn series(&self) -> &TorusSeries {
        &self.series
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        QYNormalForm::new(&self.coeff * c, self.gamma.clone(), self.series.clone())
    }

    /// (a Y_gamma S)(b Y_delta T) = a b q^{-<gamma,delta>} Y_{gamma+delta}
    /// (S twisted past delta) T.
    pub fn mul(&self, other: &QYNormalForm, ctx: &TorusContext) -> Self {
        let coeff = &(&self.coeff * &other.coeff)
            * &QCoeff::q_pow(-ctx.pairing(&self.gamma, &other.gamma));
        let gamma: Vec<i64> = self
            .gamma
            .iter()
            .zip(&other.gamma)
            .map(|(a, b)| a + b)
            .collect();
        let series = self
            .series
            .twist_past(&other.gamma, ctx)
            .mul(&other.series, ctx);
        QYNormalForm::new(coeff, gamma, series)
    }

    /// (a Y_gamma S)^{-1} = a^{-1} Y_{-gamma} twist_{-gamma}(S^{-1});
    /// Y_gamma^{-1} = Y_{-gamma} exactly since <gamma,gamma> = 0.
    pub fn inverse(&self, ctx: &TorusContext) -> Self {
        let series = self.series.inverse(ctx).twist_past(
            &self.gamma.iter().map(|x| -x).collect::<Vec<_>>(),
            ctx,
        );
        QYNormalForm::new(
            self.coeff.inv(),
            self.gamma.iter().map(|x| -x).collect(),
            series,
        )
    }

    /// 1 + self, renormalized so the series keeps unit constant term. The
    /// tropical exponent must be sign-coherent: gamma >= 0 absorbs the value
    /// into the series, gamma <= 0 (nonzero) factors 1 + x = x(1 + x^{-1}).
    pub fn one_plus(&self, ctx: &TorusContext) -> Result<Self, QTorusError> {
        let has_pos = self.gamma.iter().any(|&x| x > 0);
        let has_neg = self.gamma.iter().any(|&x| x < 0);
        match (has_pos, has_neg) {
            (true, true) => Err(QTorusError::NonCoherentExponent {
                gamma: self.gamma.clone(),
            }),
            (false, false) => {
                // gamma = 0: 1 + c S has constant term 1 + c
                let c0 = &QCoeff::one() + &self.coeff;
                if c0.is_zero() {
                    return Err(QTorusError::ZeroConstantTerm);
                }
                let series = TorusSeries::one(ctx.n())
                    .add(&self.series.scale(&self.coeff), ctx)
                    .scale(&c0.inv());
                Ok(QYNormalForm::new(c0, vec![0; ctx.n()], series))
            }
            (true, false) => {
                let grade = ctx.grade(&self.gamma);
                if grade < 1 {
                    return Err(QTorusError::NonPositiveGrade {
                        gamma: self.gamma.clone(),
                        grade,
                    });
                }
                // expand coeff * Y_gamma * S into the series and add 1
                let mono = TorusSeries::monomial(ctx, self.gamma.clone(), self.coeff.clone());
                let series = TorusSeries::one(ctx.n()).add(&mono.mul(&self.series, ctx), ctx);
                Ok(QYNormalForm::new(QCoeff::one(), vec![0; ctx.n()], series))
            }
            (false, true) => {
                // 1 + x = x (1 + x^{-1}); x^{-1} has gamma >= 0
                let inv = self.inverse(ctx);
                let tail = inv.one_plus(ctx)?;
                Ok(self.mul(&tail, ctx))
            }
        }
    }

    /// Coefficients of the series part with q set to 1; None when a
    /// coefficient has a pole there.
    pub fn series_at_q_one(
        &self,
    ) -> Option<std::collections::BTreeMap<Vec<i64>, num_rational::BigRational>> {
        let mut out = std::collections::BTreeMap::new();
        for (d, c) in self.series.terms() {
            out.insert(d.clone(), c.eval_one()?);
        }
        Some(out)
    }
}

impl fmt::Display for QYNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * Y{:?} * ({})", self.coeff, self.gamma, self.series)
    }
}

/// Exchange matrix at the current step together with the quantum y-variables
/// in normal form. The torus pairing always refers to the initial matrix held
/// by the context; `b` here is the mutated matrix B(t).
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pub b: ExchangeMatrix,
    pub y: Vec<QYNormalForm>,
}

impl QuantumSeed {
    pub fn initial(ctx: &TorusContext) -> Self {
        QuantumSeed {
            b: ctx.matrix().clone(),
            y: (1..=ctx.n())
                .map(|i| QYNormalForm::generator(ctx, i))
                .collect(),
        }
    }
}

/// Quantum seed mutation at the (1-based) vertex k: slot k is inverted and
/// slot i is multiplied by prod_{m=1}^{b_ik} (1 + q^{2m-1} Y_k), with the
/// inverse product in Y_k^{-1} when b_ik < 0.
pub fn mutate_quantum(
    seed: &QuantumSeed,
    k: usize,
    ctx: &TorusContext,
) -> Result<QuantumSeed, QTorusError> {
    let n = seed.b.n();
    assert!(k >= 1 && k <= n, "vertex {} out of range 1..={}", k, n);
    let kk = k - 1;
    let yk = &seed.y[kk];
    let yk_inv = yk.inverse(ctx);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        if i == kk {
            y.push(yk_inv.clone());
            continue;
        }
        let b_ik = seed.b.entry(i, kk);
        let mut yi = seed.y[i].clone();
        if b_ik >= 0 {
            for m in 1..=b_ik {
                let factor = yk.scale(&QCoeff::q_pow(2 * m - 1)).one_plus(ctx)?;
                yi = yi.mul(&factor, ctx);
            }
        } else {
            for m in 1..=(-b_ik) {
                let factor = yk_inv
                    .scale(&QCoeff::q_pow(2 * m - 1))
                    .one_plus(ctx)?
                    .inverse(ctx);
                yi = yi.mul(&factor, ctx);
            }
        }
        y.push(yi);
    }
    Ok(QuantumSeed {
        b: seed.b.mutate(k)?,
        y,
    })
}

/// All seeds along a mutation sequence, initial seed first.
pub fn run_quantum_trajectory(
    ctx: &TorusContext,
    sequence: &[usize],
) -> Result<Vec<QuantumSeed>, QTorusError> {
    let mut seeds = vec![QuantumSeed::initial(ctx)];
    for &k in sequence {
        let next = mutate_quantum(seeds.last().unwrap(), k, ctx)?;
        seeds.push(next);
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::a2_matrix;
    use crate::qpoly::QCoeff;

    fn ctx(deg: i64) -> TorusContext {
        TorusContext::new(a2_matrix(), deg)
    }

    #[test]
    fn generator_product_normalization() {
        let c = ctx(6);
        let y1 = QYNormalForm::generator(&c, 1);
        let y2 = QYNormalForm::generator(&c, 2);
        let p = y1.mul(&y2, &c);
        // Y_{e1+e2} = q^{-1} Y_1 Y_2, so Y_1 Y_2 = q Y_{(1,1)}
        assert_eq!(p.coeff(), &QCoeff::q_pow(1));
        assert_eq!(p.gamma(), &[1, 1]);
        assert!(p.series().is_one());
    }

    #[test]
    fn inverse_cancels() {
        let c = ctx(6);
        let y2 = QYNormalForm::generator(&c, 2);
        let x = y2
            .scale(&QCoeff::q_pow(1))
            .one_plus(&c)
            .unwrap()
            .mul(&QYNormalForm::generator(&c, 1), &c);
        let prod = x.mul(&x.inverse(&c), &c);
        assert_eq!(prod, QYNormalForm::one(&c));
    }

    #[test]
    fn one_plus_negative_exponent_factors_through_inverse() {
        // 1 + q Y_1^{-1} = q Y_{-e1} (1 + q^{-1} Y_1)
        let c = ctx(6);
        let x = QYNormalForm::monomial(&c, QCoeff::q_pow(1), vec![-1, 0]);
        let op = x.one_plus(&c).unwrap();
        assert_eq!(op.coeff(), &QCoeff::q_pow(1));
        assert_eq!(op.gamma(), &[-1, 0]);
        assert_eq!(op.series().coeff(&[1, 0]), QCoeff::q_pow(-1));
        assert_eq!(op.series().term_count(), 2);
    }

    #[test]
    fn one_plus_gamma_zero_renormalizes() {
        // 1 + (-q) => constant coefficient 1 - q
        let c = ctx(4);
        let x = QYNormalForm::monomial(&c, QCoeff::monomial(-1, 1), vec![0, 0]);
        let op = x.one_plus(&c).unwrap();
        assert_eq!(
            op.coeff(),
            &QCoeff::from_frac(
                crate::qpoly::ZPoly::from_i64(&[1, -1]),
                crate::qpoly::ZPoly::one(),
                0
            )
        );
        assert!(op.series().is_one());
        // 1 + (-1) cannot be renormalized
        let bad = QYNormalForm::monomial(&c, QCoeff::from_int(-1), vec![0, 0]);
        assert_eq!(bad.one_plus(&c), Err(QTorusError::ZeroConstantTerm));
    }

    #[test]
    fn one_plus_mixed_sign_is_rejected() {
        let c = ctx(4);
        let x = QYNormalForm::monomial(&c, QCoeff::one(), vec![1, -1]);
        match x.one_plus(&c) {
            Err(QTorusError::NonCoherentExponent { gamma }) => assert_eq!(gamma, vec![1, -1]),
            other => panic!("expected NonCoherentExponent, got {:?}", other),
        }
    }

    #[test]
    fn quantum_mutation_first_step() {
        let c = ctx(6);
        let seed = QuantumSeed::initial(&c);
        let s2 = mutate_quantum(&seed, 1, &c).unwrap();
        // slot 1: Y_1^{-1}; slot 2: Y_2 (1 + q Y_1)
        assert_eq!(s2.y[0].gamma(), &[-1, 0]);
        assert!(s2.y[0].series().is_one());
        assert_eq!(s2.y[1].gamma(), &[0, 1]);
        assert_eq!(s2.y[1].series().coeff(&[1, 0]), QCoeff::q_pow(1));
        assert_eq!(s2.y[1].series().term_count(), 2);
    }

    #[test]
    fn quantum_mutation_is_involutive() {
        let c = TorusContext::new(crate::cluster::a3_matrix(), 5);
        let seed = QuantumSeed::initial(&c);
        for k in 1..=3 {
            let twice = mutate_quantum(&mutate_quantum(&seed, k, &c).unwrap(), k, &c).unwrap();
            assert_eq!(twice.b, seed.b, "matrix after mu_{} twice", k);
            for i in 0..3 {
                assert_eq!(twice.y[i], seed.y[i], "slot {} after mu_{} twice", i, k);
            }
        }
    }

    #[test]
    fn negative_branch_mutation_matches_display() {
        // A2 step 2 slot 2: Y_2(3) = Y_2^{-1} (1 + q^{-1} Y_1)^{-1}
        let c = ctx(6);
        let seeds = run_quantum_trajectory(&c, &[1, 2]).unwrap();
        let y23 = &seeds[2].y[1];
        assert_eq!(y23.gamma(), &[0, -1]);
        let expect = QYNormalForm::generator(&c, 1)
            .scale(&QCoeff::q_pow(-1))
            .one_plus(&c)
            .unwrap()
            .inverse(&c);
        assert_eq!(y23.series(), expect.series());
        assert_eq!(y23.coeff(), &QCoeff::one());
    }
}
