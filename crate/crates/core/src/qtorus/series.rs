//! Truncated graded series over the quantum torus.

use super::TorusContext;
use crate::qpoly::QCoeff;
use std::collections::BTreeMap;
use std::fmt;

/// Finite sum of terms coeff * Y_delta with every nonzero delta admissible
/// for the owning context (positive grade, orthant when the grading is
/// positive) and grade at most the truncation degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSeries {
    n: usize,
    terms: BTreeMap<Vec<i64>, QCoeff>,
}

impl TorusSeries {
    pub fn zero(n: usize) -> Self {
        TorusSeries {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; n], QCoeff::one());
        TorusSeries { n, terms }
    }

    /// coeff * Y_delta as a one-term series.
    pub fn monomial(ctx: &TorusContext, delta: Vec<i64>, coeff: QCoeff) -> Self {
        assert_eq!(delta.len(), ctx.n());
        assert!(
            ctx.admissible(&delta),
            "inadmissible series exponent {:?}",
            delta
        );
        let mut s = TorusSeries::zero(ctx.n());
        if !coeff.is_zero() && ctx.grade(&delta) <= ctx.degree() {
            s.terms.insert(delta, coeff);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.n])
                .map_or(false, |c| c.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> QCoeff {
        self.terms
            .get(&vec![0; self.n])
            .cloned()
            .unwrap_or_else(QCoeff::zero)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, delta: &[i64]) -> QCoeff {
        self.terms
            .get(delta)
            .cloned()
            .unwrap_or_else(QCoeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QCoeff)> {
        self.terms.iter()
    }

    pub(super) fn insert_add(&mut self, ctx: &TorusContext, delta: Vec<i64>, coeff: QCoeff) {
        if coeff.is_zero() || ctx.grade(&delta) > ctx.degree() {
            return;
        }
        assert!(
            ctx.admissible(&delta),
            "inadmissible series exponent {:?}",
            delta
        );
        match self.terms.entry(delta) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TorusSeries, ctx: &TorusContext) -> TorusSeries {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.insert_add(ctx, d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &QCoeff) -> TorusSeries {
        if c.is_zero() {
            return TorusSeries::zero(self.n);
        }
        TorusSeries {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(d, v)| (d.clone(), v * c))
                .collect(),
        }
    }

    /// Noncommutative product: (a Y_alpha)(b Y_beta) =
    /// a b q^{-<alpha,beta>} Y_{alpha+beta}, truncated by grade.
    pub fn mul(&self, other: &TorusSeries, ctx: &TorusContext) -> TorusSeries {
        let mut out = TorusSeries::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if ctx.grade(&d) > ctx.degree() {
                    continue;
                }
                let coeff = &(ca * cb) * &QCoeff::q_pow(-ctx.pairing(a, b));
                out.insert_add(ctx, d, coeff);
            }
        }
        out
    }

    /// Rewrites S so that S * Y_delta = Y_delta * twist_past(S, delta):
    /// the coefficient at epsilon picks up q^{-2 <epsilon, delta>}.
    pub fn twist_past(&self, delta: &[i64], ctx: &TorusContext) -> TorusSeries {
        TorusSeries {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let tw = QCoeff::q_pow(-2 * ctx.pairing(e, delta));
                    (e.clone(), c * &tw)
                })
                .collect(),
        }
    }

    /// Multiplicative inverse; requires unit constant term.
    pub fn inverse(&self, ctx: &TorusContext) -> TorusSeries {
        let c0 = self.constant_term();
        assert!(
            c0.is_one(),
            "series inverse requires unit constant term, got {}",
            c0
        );
        // S = 1 + E with E of positive grade; S^{-1} = sum (-E)^k.
        let mut e = self.clone();
        e.terms.remove(&vec![0; self.n]);
        let mut out = TorusSeries::one(self.n);
        let mut power = TorusSeries::one(self.n);
        for _ in 0..=ctx.degree() {
            power = power.mul(&e, ctx);
            if power.is_zero() {
                break;
            }
            power = power.scale(&QCoeff::from_int(-1));
            out = out.add(&power, ctx);
        }
        out
    }

    /// Re-truncates the series into another context (used when comparing a
    /// series computed under one grading inside a second grading).
    pub fn regrade(&self, ctx: &TorusContext) -> TorusSeries {
        let mut out = TorusSeries::zero(self.n);
        for (d, c) in &self.terms {
            if ctx.grade(d) <= ctx.degree() {
                out.insert_add(ctx, d.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for TorusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if d.iter().all(|&x| x == 0) {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*Y{:?}", c, d)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::a2_matrix;

    fn ctx(deg: i64) -> TorusContext {
        TorusContext::new(a2_matrix(), deg)
    }

    #[test]
    fn product_normalization_picks_up_q_power() {
        // Y_{e1} * Y_{e2} = q^{-<e1,e2>} Y_{e1+e2} = q Y_{(1,1)} for b_12 = -1
        let c = ctx(4);
        let y1 = TorusSeries::monomial(&c, vec![1, 0], QCoeff::one());
        let y2 = TorusSeries::monomial(&c, vec![0, 1], QCoeff::one());
        let p = y1.mul(&y2, &c);
        assert_eq!(p.coeff(&[1, 1]), QCoeff::q_pow(1));
        // and the reversed product differs by q^{-2<e1,e2>} overall
        let p2 = y2.mul(&y1, &c);
        assert_eq!(p2.coeff(&[1, 1]), QCoeff::q_pow(-1));
    }

    #[test]
    fn inverse_is_geometric() {
        let c = ctx(5);
        let s = TorusSeries::one(2).add(
            &TorusSeries::monomial(&c, vec![0, 1], QCoeff::q_pow(1)),
            &c,
        );
        let inv = s.inverse(&c);
        for k in 0..=5i64 {
            let want = QCoeff::monomial(if k % 2 == 0 { 1 } else { -1 }, k);
            assert_eq!(inv.coeff(&[0, k]), want, "term k={}", k);
        }
        assert!(s.mul(&inv, &c).is_one());
        assert!(inv.mul(&s, &c).is_one());
    }

    #[test]
    fn truncation_respects_grade() {
        let c = ctx(3);
        let s = TorusSeries::monomial(&c, vec![1, 1], QCoeff::one());
        let p = s.mul(&s, &c); // grade 4 > 3: dropped entirely
        assert!(p.is_zero());
    }

    #[test]
    fn twist_past_matches_commutation() {
        // Y_{e1} Y_{e2} = q^{-2<e1,e2>} Y_{e2} Y_{e1}
        let c = ctx(4);
        let s = TorusSeries::monomial(&c, vec![1, 0], QCoeff::one());
        let t = s.twist_past(&[0, 1], &c);
        assert_eq!(t.coeff(&[1, 0]), QCoeff::q_pow(2));
    }
}
