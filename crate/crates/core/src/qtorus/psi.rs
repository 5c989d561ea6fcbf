//! Series coefficients of the compact quantum dilogarithm and related
//! q-Pochhammer expansions, applied to normal-form arguments.
//!
//! All coefficient sequences are generated order by order from the defining
//! products via their functional equations; closed forms serve as test
//! oracles only.

use super::normal::QYNormalForm;
use super::series::TorusSeries;
use super::{QTorusError, TorusContext};
use crate::qpoly::QCoeff;

/// 1 - q^{2m}.
fn one_minus_q2m(m: i64) -> QCoeff {
    &QCoeff::one() - &QCoeff::q_pow(2 * m)
}

/// Coefficients a_0..a_max of (-q x; q^2)_inf = prod_{k>=0} (1 + q^{2k+1} x),
/// the reciprocal of the compact quantum dilogarithm. From
/// A(x) = (1 + qx) A(q^2 x): a_m = q^{2m-1} a_{m-1} / (1 - q^{2m}).
pub fn psi_inverse_coefficients(max: usize) -> Vec<QCoeff> {
    let mut out = vec![QCoeff::one()];
    for m in 1..=max as i64 {
        let prev = out.last().unwrap();
        out.push(&(prev * &QCoeff::q_pow(2 * m - 1)) / &one_minus_q2m(m));
    }
    out
}

/// Coefficients c_0..c_max of the compact quantum dilogarithm itself, solved
/// from sum_{j} c_j a_{m-j} = [m = 0].
pub fn psi_coefficients(max: usize) -> Vec<QCoeff> {
    let a = psi_inverse_coefficients(max);
    let mut c = vec![QCoeff::one()];
    for m in 1..=max {
        let mut s = QCoeff::zero();
        for j in 0..m {
            s = &s + &(&c[j] * &a[m - j]);
        }
        c.push(-&s);
    }
    c
}

/// Coefficients p_0..p_max of (x; q^2)_inf = prod_{k>=0} (1 - q^{2k} x).
/// From A(x) = (1 - x) A(q^2 x): p_m = -q^{2m-2} p_{m-1} / (1 - q^{2m}).
pub fn pochhammer_q2_coefficients(max: usize) -> Vec<QCoeff> {
    let mut out = vec![QCoeff::one()];
    for m in 1..=max as i64 {
        let prev = out.last().unwrap();
        let num = prev * &QCoeff::monomial(-1, 2 * m - 2);
        out.push(&num / &one_minus_q2m(m));
    }
    out
}

/// sum_m coeffs[m] x^m as a truncated series; the leading exponent of x must
/// have positive grade (and stay representable) so that powers truncate.
pub fn apply_coefficient_series(
    ctx: &TorusContext,
    coeffs: &[QCoeff],
    x: &QYNormalForm,
) -> Result<TorusSeries, QTorusError> {
    let g = ctx.grade(x.gamma());
    if g < 1 {
        return Err(QTorusError::NonPositiveGrade {
            gamma: x.gamma().to_vec(),
            grade: g,
        });
    }
    if !ctx.admissible(x.gamma()) {
        return Err(QTorusError::NonCoherentExponent {
            gamma: x.gamma().to_vec(),
        });
    }
    let max_pow = (ctx.degree() / g) as usize;
    let mut out = TorusSeries::one(ctx.n());
    let mut power = QYNormalForm::one(ctx);
    for coeff in coeffs.iter().take(max_pow + 1).skip(1) {
        power = power.mul(x, ctx);
        out = out.add(&expand(ctx, &power).scale(coeff), ctx);
    }
    Ok(out)
}

/// Expands a normal form into a plain series: coeff * (Y_gamma * S).
pub(super) fn expand(ctx: &TorusContext, nf: &QYNormalForm) -> TorusSeries {
    TorusSeries::monomial(ctx, nf.gamma().to_vec(), nf.coeff().clone())
        .mul(nf.series(), ctx)
}

/// The compact quantum dilogarithm of a normal-form argument, to the
/// context's truncation degree; sign -1 gives its reciprocal.
pub fn psi_apply(
    ctx: &TorusContext,
    x: &QYNormalForm,
    sign: i8,
) -> Result<TorusSeries, QTorusError> {
    let max = ctx.degree().max(0) as usize;
    let coeffs = if sign >= 0 {
        psi_coefficients(max)
    } else {
        psi_inverse_coefficients(max)
    };
    apply_coefficient_series(ctx, &coeffs, x)
}

/// (x; q^2)_inf of a normal-form argument.
pub fn pochhammer_apply(
    ctx: &TorusContext,
    x: &QYNormalForm,
) -> Result<TorusSeries, QTorusError> {
    let max = ctx.degree().max(0) as usize;
    apply_coefficient_series(ctx, &pochhammer_q2_coefficients(max), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::a2_matrix;
    use crate::qpoly::ZPoly;

    fn ctx(deg: i64) -> TorusContext {
        TorusContext::new(a2_matrix(), deg)
    }

    /// (q^2; q^2)_m = prod_{j=1}^m (1 - q^{2j}).
    fn q2_factorial(m: i64) -> QCoeff {
        let mut out = QCoeff::one();
        for j in 1..=m {
            out = &out * &one_minus_q2m(j);
        }
        out
    }

    #[test]
    fn inverse_coefficients_match_closed_form() {
        let a = psi_inverse_coefficients(10);
        for (m, am) in a.iter().enumerate() {
            let m = m as i64;
            let want = &QCoeff::q_pow(m * m) / &q2_factorial(m);
            assert_eq!(am, &want, "a_{}", m);
        }
    }

    #[test]
    fn psi_coefficients_match_closed_form() {
        let c = psi_coefficients(10);
        assert_eq!(
            c[1],
            QCoeff::from_frac(ZPoly::from_i64(&[-1]), ZPoly::from_i64(&[1, 0, -1]), 1)
        );
        for (m, cm) in c.iter().enumerate() {
            let m = m as i64;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let want = &QCoeff::monomial(sign, m) / &q2_factorial(m);
            assert_eq!(cm, &want, "c_{}", m);
        }
    }

    #[test]
    fn pochhammer_coefficients_match_closed_form() {
        let p = pochhammer_q2_coefficients(8);
        for (m, pm) in p.iter().enumerate() {
            let m = m as i64;
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let want = &QCoeff::monomial(sign, m * (m - 1)) / &q2_factorial(m);
            assert_eq!(pm, &want, "p_{}", m);
        }
    }

    #[test]
    fn functional_equation_on_normal_form_argument() {
        // Psi(q^2 x) = (1 + q x) Psi(x) for x = Y_2
        let c = ctx(8);
        let x = QYNormalForm::generator(&c, 2);
        let lhs = psi_apply(&c, &x.scale(&QCoeff::q_pow(2)), 1).unwrap();
        let one_plus_qx = x.scale(&QCoeff::q_pow(1)).one_plus(&c).unwrap();
        let rhs = expand(&c, &one_plus_qx).mul(&psi_apply(&c, &x, 1).unwrap(), &c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn functional_equation_on_composite_argument() {
        // same identity for the mutated-variable shape x = Y_2 (1 + q Y_1)
        let c = ctx(6);
        let y1 = QYNormalForm::generator(&c, 1);
        let x = QYNormalForm::generator(&c, 2)
            .mul(&y1.scale(&QCoeff::q_pow(1)).one_plus(&c).unwrap(), &c);
        let lhs = psi_apply(&c, &x.scale(&QCoeff::q_pow(2)), 1).unwrap();
        let one_plus_qx = x.scale(&QCoeff::q_pow(1)).one_plus(&c).unwrap();
        let rhs = expand(&c, &one_plus_qx).mul(&psi_apply(&c, &x, 1).unwrap(), &c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_times_reciprocal_is_one() {
        let c = ctx(8);
        let x = QYNormalForm::generator(&c, 1);
        let p = psi_apply(&c, &x, 1)
            .unwrap()
            .mul(&psi_apply(&c, &x, -1).unwrap(), &c);
        assert!(p.is_one());
    }

    #[test]
    fn defining_product_kills_low_q_orders() {
        // Psi(Y_1) * prod_{k=0}^{K} (1 + q^{2k+1} Y_1) = 1 + terms whose
        // coefficients vanish to q-order at least 2K+1.
        let c = ctx(6);
        let kmax: i64 = 9;
        let x = QYNormalForm::generator(&c, 1);
        let mut prod = psi_apply(&c, &x, 1).unwrap();
        for k in 0..=kmax {
            let f = x.scale(&QCoeff::q_pow(2 * k + 1)).one_plus(&c).unwrap();
            prod = prod.mul(&expand(&c, &f), &c);
        }
        for (d, coeff) in prod.terms() {
            if d.iter().all(|&x| x == 0) {
                assert!(coeff.is_one());
                continue;
            }
            let (shift, _, _) = coeff.parts();
            assert!(
                shift >= 2 * kmax + 1,
                "residual term at {:?} has q-valuation {}",
                d,
                shift
            );
        }
    }

    #[test]
    fn nonpositive_grade_is_rejected() {
        let c = ctx(6);
        let x = QYNormalForm::monomial(&c, QCoeff::one(), vec![0, 0]);
        match psi_apply(&c, &x, 1) {
            Err(QTorusError::NonPositiveGrade { grade, .. }) => assert_eq!(grade, 0),
            other => panic!("expected NonPositiveGrade, got {:?}", other),
        }
        let x = QYNormalForm::monomial(&c, QCoeff::one(), vec![0, -1]);
        assert!(matches!(
            psi_apply(&c, &x, 1),
            Err(QTorusError::NonPositiveGrade { .. })
        ));
    }
}
