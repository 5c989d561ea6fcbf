//! Mutation dynamics of the cyclic and root-of-unity y-variables, in three
//! mutually checking tracks.
//!
//! At a vertex `k` with current exchange matrix `B(t)` the cyclic variables
//! transform as
//!
//! ```text
//!   y_k   -> y_k^{-1}
//!   y_i   -> y_i * (1 + zt * y_k^{ N})^(b_ik/N)   if b_ik >= 0
//!   y_i   -> y_i * (1 + zt * y_k^{-N})^(b_ik/N)   if b_ik <  0
//! ```
//!
//! with `b_ik = B(t)[i][k]` and `zt = zeta^(N^2)`. The companion commutative
//! variables `yt_i = y_i^N` satisfy the same rule with the exponent `b_ik`
//! (no `/N`) and `y_k^{+-N}` replaced by `yt_k^{+-1}`; the symbolic track
//! advances that commutative track in lockstep and reads the central
//! arguments `y_k^{+-N}` from it, keeping every slot in canonical form. The
//! standard quantum variables specialized at `q = zeta` keep their usual
//! rule with products of `(1 + q^(2m-1) y_k)` factors.

use super::linalg::{inverse, plus_scaled_identity};
use super::symbol::{CyclicYSymbol, DualY, SymbolContext};
use super::weyl::WeylRep;
use super::RootRepError;
use crate::cluster::ExchangeMatrix;
use faer::complex_native::c64;
use faer::Mat;

/// Matrix realization of the standard quantum y-variables at `q = zeta`.
#[derive(Debug, Clone)]
pub struct QuantumMatrixTrack {
    rep: WeylRep,
    b_t: ExchangeMatrix,
    y: Vec<Mat<c64>>,
    steps: usize,
}

impl QuantumMatrixTrack {
    pub fn new(rep: WeylRep) -> Self {
        let y = (0..rep.n()).map(|i| rep.y_generator(i)).collect();
        let b_t = rep.matrix().clone();
        Self {
            rep,
            b_t,
            y,
            steps: 0,
        }
    }

    pub fn rep(&self) -> &WeylRep {
        &self.rep
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b_t
    }

    /// Current variable at vertex `i` (0-based).
    pub fn slot(&self, i: usize) -> &Mat<c64> {
        &self.y[i]
    }

    /// Mutates at vertex `k` (1-based).
    pub fn step(&mut self, k: usize) -> Result<(), RootRepError> {
        let kk = self.b_t.check_vertex(k)?;
        let n = self.rep.n();
        let params = self.rep.params();
        let yk = self.y[kk].clone();
        let step_id = self.steps + 1;
        let yk_inv = inverse(&yk).map_err(|_| RootRepError::SingularFactor { step: step_id })?;
        for i in 0..n {
            if i == kk {
                continue;
            }
            let b_ik = self.b_t.entry(i, kk);
            if b_ik == 0 {
                continue;
            }
            if b_ik > 0 {
                let mut f = self.y[i].clone();
                for m in 1..=b_ik {
                    f = &f * &plus_scaled_identity(&yk, params.zeta_pow(2 * m - 1));
                }
                self.y[i] = f;
            } else {
                let mut f = Mat::<c64>::identity(yk.nrows(), yk.ncols());
                for m in 1..=(-b_ik) {
                    f = &f * &plus_scaled_identity(&yk_inv, params.zeta_pow(2 * m - 1));
                }
                let f_inv =
                    inverse(&f).map_err(|_| RootRepError::SingularFactor { step: step_id })?;
                self.y[i] = &self.y[i] * &f_inv;
            }
        }
        self.y[kk] = yk_inv;
        self.b_t = self.b_t.mutate(k)?;
        self.steps += 1;
        Ok(())
    }
}

/// Exact symbolic realization of the cyclic y-variables.
///
/// The central mutation argument `y_k^{+-N}` is read from the commutative
/// companion track (advanced in lockstep), so every correction factor is an
/// honest rational function of the `yt_i` regardless of how the symbolic
/// slot currently distributes signs between its phase and its factors.
#[derive(Debug, Clone)]
pub struct SymbolicCyclicTrack {
    ctx: SymbolContext,
    b_t: ExchangeMatrix,
    y: Vec<CyclicYSymbol>,
    dual: DualTrack,
    steps: usize,
}

impl SymbolicCyclicTrack {
    pub fn new(ctx: SymbolContext) -> Self {
        let n = ctx.n();
        let y = (0..n).map(|i| CyclicYSymbol::generator(n, i)).collect();
        let b_t = ctx.matrix().clone();
        let dual = DualTrack::new(ctx.matrix(), ctx.tilde_sign());
        Self {
            ctx,
            b_t,
            y,
            dual,
            steps: 0,
        }
    }

    pub fn ctx(&self) -> &SymbolContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b_t
    }

    /// Current variable at vertex `i` (0-based).
    pub fn slot(&self, i: usize) -> &CyclicYSymbol {
        &self.y[i]
    }

    /// The lockstep commutative track holding the N-th powers.
    pub fn dual(&self) -> &DualTrack {
        &self.dual
    }

    /// Mutates at vertex `k` (1-based).
    pub fn step(&mut self, k: usize) -> Result<(), RootRepError> {
        let kk = self.b_t.check_vertex(k)?;
        let n = self.ctx.n();
        let d = self.dual.slot(kk).clone();
        let d_inv = d.inverse();
        for i in 0..n {
            if i == kk {
                continue;
            }
            let b_ik = self.b_t.entry(i, kk);
            if b_ik == 0 {
                continue;
            }
            let arg = if b_ik >= 0 { &d } else { &d_inv };
            let (numer, denom) = arg.one_plus_times(self.ctx.tilde_sign());
            self.y[i].mul_fractional(&self.ctx, numer, denom, b_ik);
        }
        self.y[kk] = self.y[kk].inverse(&self.ctx);
        self.dual.step(k)?;
        self.b_t = self.b_t.mutate(k)?;
        self.steps += 1;
        Ok(())
    }
}

/// Exact Laurent realization of the commuting variables `yt_i = y_i^N`.
#[derive(Debug, Clone)]
pub struct DualTrack {
    b_t: ExchangeMatrix,
    y: Vec<DualY>,
    tilde_sign: i64,
    steps: usize,
}

impl DualTrack {
    pub fn new(b: &ExchangeMatrix, tilde_sign: i64) -> Self {
        assert!(tilde_sign == 1 || tilde_sign == -1);
        let n = b.n();
        let y = (0..n).map(|i| DualY::generator(n, i)).collect();
        Self {
            b_t: b.clone(),
            y,
            tilde_sign,
            steps: 0,
        }
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b_t
    }

    /// Current variable at vertex `i` (0-based).
    pub fn slot(&self, i: usize) -> &DualY {
        &self.y[i]
    }

    /// Mutates at vertex `k` (1-based).
    pub fn step(&mut self, k: usize) -> Result<(), RootRepError> {
        let kk = self.b_t.check_vertex(k)?;
        let n = self.b_t.n();
        let cur = self.y[kk].clone();
        let cur_inv = cur.inverse();
        for i in 0..n {
            if i == kk {
                continue;
            }
            let b_ik = self.b_t.entry(i, kk);
            if b_ik == 0 {
                continue;
            }
            let arg = if b_ik >= 0 { &cur } else { &cur_inv };
            let (numer, denom) = arg.one_plus_times(self.tilde_sign);
            self.y[i].mul_rational(&numer, &denom, b_ik);
        }
        self.y[kk] = cur_inv;
        self.b_t = self.b_t.mutate(k)?;
        self.steps += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{a2_matrix, a3_matrix, A2_SEQUENCE, A3_SEQUENCE};
    use crate::rootrep::linalg::{mat_pow, rel_residual, scalar_of};
    use crate::rootrep::weyl::{sample_lambdas, RootParams};
    use crate::rootrep::{SymbolFactor, TildePoly};

    fn a2_ctx(n_root: u32) -> SymbolContext {
        SymbolContext::new(&a2_matrix(), RootParams::new(n_root))
    }

    fn poly2(terms: &[(&[u32], i64)]) -> TildePoly {
        let mut acc = TildePoly::zero(2);
        for (k, c) in terms {
            acc = acc.add(&TildePoly::monomial(2, k.to_vec(), *c));
        }
        acc
    }

    /// The five-step rank-2 trace, checked against its hand-computed
    /// symbolic waypoints for both parities of `zeta_tilde`.
    #[test]
    fn symbolic_rank2_trace_waypoints() {
        for n_root in [2u32, 3] {
            let ctx = a2_ctx(n_root);
            let zt = ctx.tilde_sign();
            let mut track = SymbolicCyclicTrack::new(ctx.clone());

            // Step 1 at vertex 1: slot 2 gains (1 + zt*yt_1)^(1/N).
            track.step(1).unwrap();
            assert!(track.slot(0).is_pure_monomial(&[-1, 0]));
            let s2 = track.slot(1);
            assert_eq!(s2.zeta_exp, 0);
            assert_eq!(s2.gamma, vec![0, 1]);
            assert_eq!(
                s2.factors,
                vec![SymbolFactor {
                    poly: poly2(&[(&[0, 0], 1), (&[1, 0], zt)]),
                    rho_num: 1
                }]
            );

            // Step 2 at vertex 2: slot 1 becomes
            // Y_{-e1} * (1 + zt*yt_2 + yt_1*yt_2)^(1/N).
            track.step(2).unwrap();
            let s1 = track.slot(0);
            assert_eq!(s1.zeta_exp, 0);
            assert_eq!(s1.gamma, vec![-1, 0]);
            assert_eq!(
                s1.factors,
                vec![SymbolFactor {
                    poly: poly2(&[(&[0, 0], 1), (&[0, 1], zt), (&[1, 1], 1)]),
                    rho_num: 1
                }]
            );

            // Step 3 at vertex 1: slot 2 collapses to
            // Y_{(-1,-1)} * (1 + zt*yt_2)^(1/N) with no phase. For odd N
            // the factor arrives as (zt + yt_2)^(1/N) and its sign is
            // dropped projectively by canonicalization.
            track.step(1).unwrap();
            let s2 = track.slot(1);
            assert_eq!(s2.gamma, vec![-1, -1]);
            assert_eq!(
                s2.factors,
                vec![SymbolFactor {
                    poly: poly2(&[(&[0, 0], 1), (&[0, 1], zt)]),
                    rho_num: 1
                }]
            );
            assert_eq!(s2.zeta_exp, 0);

            // Full five-step period: slots return swapped.
            track.step(2).unwrap();
            track.step(1).unwrap();
            assert!(
                track.slot(0).is_pure_monomial(&[0, 1]),
                "slot 1 after period: {}",
                track.slot(0)
            );
            assert!(
                track.slot(1).is_pure_monomial(&[1, 0]),
                "slot 2 after period: {}",
                track.slot(1)
            );
            // The exchange matrix also returns only up to the same swap.
            assert_eq!(track.matrix().entry(0, 1), a2_matrix().entry(1, 0));
        }
    }

    #[test]
    fn dual_track_rank2_period_swaps_generators() {
        for tilde_sign in [1i64, -1] {
            let mut track = DualTrack::new(&a2_matrix(), tilde_sign);
            for &k in A2_SEQUENCE.iter() {
                track.step(k).unwrap();
            }
            assert!(track.slot(0).is_pure_monomial(&[0, 1]));
            assert!(track.slot(1).is_pure_monomial(&[1, 0]));
        }
    }

    #[test]
    fn symbolic_rank3_trace_period_permutes_generators() {
        for n_root in [2u32, 3] {
            let ctx = SymbolContext::new(&a3_matrix(), RootParams::new(n_root));
            let mut track = SymbolicCyclicTrack::new(ctx);
            let mut dual = DualTrack::new(&a3_matrix(), RootParams::new(n_root).zeta_tilde() as i64);
            for &k in A3_SEQUENCE.iter() {
                track.step(k).unwrap();
                dual.step(k).unwrap();
            }
            // Vertices 1 and 3 swap, vertex 2 stays.
            assert!(track.slot(0).is_pure_monomial(&[0, 0, 1]));
            assert!(track.slot(1).is_pure_monomial(&[0, 1, 0]));
            assert!(track.slot(2).is_pure_monomial(&[1, 0, 0]));
            assert!(dual.slot(0).is_pure_monomial(&[0, 0, 1]));
            assert!(dual.slot(1).is_pure_monomial(&[0, 1, 0]));
            assert!(dual.slot(2).is_pure_monomial(&[1, 0, 0]));
        }
    }

    /// At every step, the N-th power of each symbolic slot must agree with
    /// the lockstep commutative track as a Laurent rational function up to
    /// an exactly computed sign. The sign is not always `+1`: a slot that
    /// dropped a factor sign projectively lifts to the commutative value up
    /// to that same sign, which stays inline in the commutative track.
    #[test]
    fn symbolic_nth_powers_match_dual_track_stepwise() {
        let cases: [(ExchangeMatrix, &[usize], u32); 3] = [
            (a2_matrix(), &A2_SEQUENCE, 2),
            (a2_matrix(), &A2_SEQUENCE, 3),
            (a3_matrix(), &A3_SEQUENCE, 3),
        ];
        for (b, seq, n_root) in cases {
            let params = RootParams::new(n_root);
            let ctx = SymbolContext::new(&b, params);
            let mut sym = SymbolicCyclicTrack::new(ctx.clone());
            for (t, &k) in seq.iter().enumerate() {
                sym.step(k).unwrap();
                for i in 0..b.n() {
                    let lifted = sym.slot(i).nth_power(&ctx);
                    let ratio = lifted.ratio_sign(sym.dual().slot(i));
                    assert!(
                        ratio.is_some(),
                        "slot {i} after step {} (N={n_root}): {} vs {}",
                        t + 1,
                        lifted,
                        sym.dual().slot(i)
                    );
                }
            }
        }
    }

    /// Value-level coherence: the N-th matrix power of each symbolic slot's
    /// value is a central scalar equal to the commutative slot's value up
    /// to the same exactly computed sign as the symbolic lift.
    #[test]
    fn symbolic_values_cube_to_dual_values() {
        for n_root in [2u32, 3] {
            let params = RootParams::new(n_root);
            let b = a2_matrix();
            let lambda = sample_lambdas(2, params, 11, 0);
            let rep = WeylRep::new(&b, params, &lambda).unwrap();
            let ctx = SymbolContext::new(&b, params);
            let mut sym = SymbolicCyclicTrack::new(ctx.clone());
            for (t, &k) in A2_SEQUENCE.iter().enumerate() {
                sym.step(k).unwrap();
                for i in 0..2 {
                    let lifted = sym.slot(i).nth_power(&ctx);
                    let sign = lifted
                        .ratio_sign(sym.dual().slot(i))
                        .expect("lift differs from dual track by more than a sign")
                        as f64;
                    let m = sym.slot(i).value(&rep).unwrap();
                    let c = scalar_of(&mat_pow(&m, n_root), 1e-9).unwrap();
                    let expect = sym.dual().slot(i).value(&rep) * sign;
                    assert!(
                        (c - expect).norm() < 1e-9 * expect.norm().max(1.0),
                        "slot {i} after step {} (N={n_root}): {c} vs {expect}",
                        t + 1
                    );
                }
            }
        }
    }

    #[test]
    fn quantum_matrix_track_involution_and_periodicity() {
        let params = RootParams::new(3);
        let b = a2_matrix();
        let lambda = sample_lambdas(2, params, 5, 0);
        let rep = WeylRep::new(&b, params, &lambda).unwrap();

        // Mutating twice at the same vertex returns to the start.
        let mut track = QuantumMatrixTrack::new(rep.clone());
        track.step(1).unwrap();
        track.step(1).unwrap();
        for i in 0..2 {
            assert!(rel_residual(track.slot(i), &rep.y_generator(i)) < 1e-10);
        }

        // The five-step sequence swaps the two variables.
        let mut track = QuantumMatrixTrack::new(rep.clone());
        for &k in A2_SEQUENCE.iter() {
            track.step(k).unwrap();
        }
        assert!(rel_residual(track.slot(0), &rep.y_generator(1)) < 1e-9);
        assert!(rel_residual(track.slot(1), &rep.y_generator(0)) < 1e-9);
    }

    #[test]
    fn symbolic_track_involution() {
        let ctx = SymbolContext::new(&a3_matrix(), RootParams::new(4));
        let mut track = SymbolicCyclicTrack::new(ctx);
        track.step(2).unwrap();
        track.step(2).unwrap();
        for i in 0..3 {
            let mut gamma = vec![0i64; 3];
            gamma[i] = 1;
            assert!(
                track.slot(i).is_pure_monomial(&gamma),
                "slot {i} did not return after double mutation: {}",
                track.slot(i)
            );
            assert!(track.dual().slot(i).is_pure_monomial(&gamma));
        }
    }
}
