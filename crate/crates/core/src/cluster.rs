//! Exact classical cluster dynamics: exchange-matrix mutation, subtraction-free
//! y-variables, tropicalization, c-vectors with signs, and period detection.
//!
//! Vertices are 1-based in every public interface. Internally rows and columns
//! are 0-based.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterError {
    OutOfRangeVertex { k: usize, n: usize },
    NotSkewSymmetric { i: usize, j: usize },
    MixedSign { vector: Vec<i64> },
    NotAPeriod,
    Parse { line: usize, msg: String },
}

impl fmt::Display for ClusterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterError::OutOfRangeVertex { k, n } => {
                write!(f, "vertex {} out of range 1..={}", k, n)
            }
            ClusterError::NotSkewSymmetric { i, j } => {
                write!(f, "matrix is not skew-symmetric at entry ({}, {})", i, j)
            }
            ClusterError::MixedSign { vector } => {
                write!(f, "tropical exponent {:?} mixes signs", vector)
            }
            ClusterError::NotAPeriod => write!(f, "mutation sequence is not a period"),
            ClusterError::Parse { line, msg } => write!(f, "line {}: {}", line, msg),
        }
    }
}

impl std::error::Error for ClusterError {}

/// Skew-symmetric integer exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMatrix {
    n: usize,
    b: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, ClusterError> {
        let n = b.len();
        for (i, row) in b.iter().enumerate() {
            if row.len() != n {
                return Err(ClusterError::NotSkewSymmetric { i: i + 1, j: 0 });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if b[i][j] != -b[j][i] {
                    return Err(ClusterError::NotSkewSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(ExchangeMatrix { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry b_ij with 0-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// Validates a 1-based vertex label and returns its 0-based index.
    pub fn check_vertex(&self, k: usize) -> Result<usize, ClusterError> {
        if k == 0 || k > self.n {
            Err(ClusterError::OutOfRangeVertex { k, n: self.n })
        } else {
            Ok(k - 1)
        }
    }

    /// Matrix mutation at the (1-based) vertex k.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix, ClusterError> {
        let k = self.check_vertex(k)?;
        let mut out = self.b.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == k || j == k {
                    out[i][j] = -self.b[i][j];
                } else {
                    out[i][j] = self.b[i][j]
                        + pos(-self.b[i][k]) * self.b[k][j]
                        + self.b[i][k] * pos(self.b[k][j]);
                }
            }
        }
        Ok(ExchangeMatrix { n: self.n, b: out })
    }

    /// True when the directed graph (edge i -> j iff b_ij > 0) has no cycle.
    pub fn is_acyclic(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.n];
        fn dfs(b: &[Vec<i64>], state: &mut [u8], v: usize) -> bool {
            state[v] = 1;
            for (w, &e) in b[v].iter().enumerate() {
                if e > 0 {
                    if state[w] == 1 {
                        return false;
                    }
                    if state[w] == 0 && !dfs(b, state, w) {
                        return false;
                    }
                }
            }
            state[v] = 2;
            true
        }
        (0..self.n).all(|v| state[v] != 0 || dfs(&self.b, &mut state, v))
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// Multivariate polynomial in y_1..y_n with nonnegative integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigUint>,
}

impl PosPoly {
    pub fn one(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; n], BigUint::one());
        PosPoly { n, terms }
    }

    pub fn monomial(n: usize, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), n);
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigUint::one());
        PosPoly { n, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigUint)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &PosPoly) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert_with(BigUint::zero) += c;
        }
        PosPoly { n: self.n, terms }
    }

    pub fn mul(&self, other: &PosPoly) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(BigUint::zero) += ca * cb;
            }
        }
        PosPoly { n: self.n, terms }
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut out = PosPoly::one(self.n);
        for _ in 0..m {
            out = out.mul(self);
        }
        out
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Vec<u32> {
        assert!(!self.is_zero());
        let mut m = vec![u32::MAX; self.n];
        for e in self.terms.keys() {
            for (mi, &ei) in m.iter_mut().zip(e) {
                *mi = (*mi).min(ei);
            }
        }
        m
    }

    fn shift_down(&self, m: &[u32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().zip(m).map(|(a, b)| a - b).collect(),
                    c.clone(),
                )
            })
            .collect();
        PosPoly { n: self.n, terms }
    }

    pub fn constant_coeff(&self) -> BigUint {
        self.terms
            .get(&vec![0; self.n])
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }
}

impl fmt::Display for PosPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let trivial = e.iter().all(|&x| x == 0);
            if !c.is_one() || trivial {
                write!(f, "{}", c)?;
            }
            for (i, &ei) in e.iter().enumerate() {
                if ei == 1 {
                    write!(f, "y{}", i + 1)?;
                } else if ei > 1 {
                    write!(f, "y{}^{}", i + 1, ei)?;
                }
            }
        }
        Ok(())
    }
}

/// Subtraction-free rational function of y: a fraction of two `PosPoly`s,
/// reduced only by common monomial content.
#[derive(Clone, Debug)]
pub struct ClassicalY {
    num: PosPoly,
    den: PosPoly,
}

impl ClassicalY {
    pub fn initial(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ClassicalY {
            num: PosPoly::monomial(n, e),
            den: PosPoly::one(n),
        }
    }

    pub fn from_parts(num: PosPoly, den: PosPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert!(!num.is_zero(), "zero numerator");
        ClassicalY { num, den }
    }

    pub fn num(&self) -> &PosPoly {
        &self.num
    }

    pub fn den(&self) -> &PosPoly {
        &self.den
    }

    fn reduce_monomial_content(self) -> Self {
        let mn = self.num.min_exponents();
        let md = self.den.min_exponents();
        let m: Vec<u32> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if m.iter().all(|&x| x == 0) {
            return self;
        }
        ClassicalY {
            num: self.num.shift_down(&m),
            den: self.den.shift_down(&m),
        }
    }

    pub fn inverse(&self) -> Self {
        ClassicalY {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    /// Exact equality in the field of fractions (cross-multiplication).
    pub fn eq_value(&self, other: &ClassicalY) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Componentwise-min exponent of the numerator minus that of the
    /// denominator; independent of the representative.
    pub fn tropicalize(&self) -> Vec<i64> {
        let mn = self.num.min_exponents();
        let md = self.den.min_exponents();
        mn.iter()
            .zip(&md)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }

    /// Expansion of y^(-c) * self as a power series on the nonnegative
    /// orthant, truncated at total degree D. Requires both reduced parts to
    /// have a nonzero constant term (true for cluster trajectory variables).
    pub fn series_expansion(&self, deg: usize) -> Option<BTreeMap<Vec<i64>, BigRational>> {
        let n = self.num.n;
        let num0 = self.num.shift_down(&self.num.min_exponents());
        let den0 = self.den.shift_down(&self.den.min_exponents());
        let c_num = num0.constant_coeff();
        let c_den = den0.constant_coeff();
        if c_num.is_zero() || c_den.is_zero() {
            return None;
        }

        type Map = BTreeMap<Vec<u32>, BigRational>;
        let to_map = |p: &PosPoly| -> Map {
            p.terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as usize).sum::<usize>() <= deg)
                .map(|(e, c)| {
                    (
                        e.clone(),
                        BigRational::from_integer(BigInt::from(c.clone())),
                    )
                })
                .collect()
        };
        let mul_trunc = |a: &Map, b: &Map| -> Map {
            let mut out: Map = BTreeMap::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    if e.iter().map(|&x| x as usize).sum::<usize>() > deg {
                        continue;
                    }
                    let v = ca * cb;
                    let entry = out.entry(e).or_insert_with(BigRational::zero);
                    *entry += v;
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        };

        // 1/den0 by Neumann series: den0 = c(1 + E), 1/den0 = (1/c) sum (-E)^k.
        let c = BigRational::from_integer(BigInt::from(c_den));
        let mut e_part = to_map(&den0);
        for (ex, v) in e_part.iter_mut() {
            if ex.iter().all(|&x| x == 0) {
                *v = BigRational::zero();
            } else {
                *v /= &c;
            }
        }
        e_part.retain(|_, v| !v.is_zero());

        let mut inv: Map = BTreeMap::new();
        inv.insert(vec![0; n], c.recip());
        let mut power: Map = BTreeMap::new();
        power.insert(vec![0; n], c.recip());
        for _ in 1..=deg {
            power = mul_trunc(&power, &e_part);
            if power.is_empty() {
                break;
            }
            for (ex, v) in &power {
                let entry = inv.entry(ex.clone()).or_insert_with(BigRational::zero);
                *entry -= v;
            }
            // alternate sign by negating the running power
            for v in power.values_mut() {
                *v = -v.clone();
            }
        }
        inv.retain(|_, v| !v.is_zero());

        let result = mul_trunc(&to_map(&num0), &inv);
        Some(
            result
                .into_iter()
                .map(|(e, v)| (e.iter().map(|&x| x as i64).collect(), v))
                .collect(),
        )
    }
}

/// c-vector with its tropical sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CVector {
    pub c: Vec<i64>,
    pub sign: i8,
}

pub fn c_vector_and_sign(y: &ClassicalY) -> Result<CVector, ClusterError> {
    let c = y.tropicalize();
    let has_pos = c.iter().any(|&x| x > 0);
    let has_neg = c.iter().any(|&x| x < 0);
    match (has_pos, has_neg) {
        (true, false) => Ok(CVector { c, sign: 1 }),
        (false, true) => Ok(CVector { c, sign: -1 }),
        (false, false) | (true, true) => Err(ClusterError::MixedSign { vector: c }),
    }
}

/// Tropical exponent vectors along a sequence under a chosen sign per step:
/// at step s (vertex k, sign e) the vector of vertex k is recorded, then
/// c_i += [e*b_ki]_+ c_k for i != k and c_k flips. With the tropical signs
/// this reproduces the c-vectors; other choices give the sign-adapted
/// vectors entering the conjugation (shuffle) relation. One sign per step
/// except the last (whose vector needs no further update).
pub fn signed_c_vectors(
    b: &ExchangeMatrix,
    sequence: &[usize],
    signs: &[i8],
) -> Result<Vec<Vec<i64>>, ClusterError> {
    assert_eq!(
        signs.len() + 1,
        sequence.len().max(1),
        "need one sign per step except the last"
    );
    assert!(signs.iter().all(|&e| e == 1 || e == -1), "signs must be ±1");
    let n = b.n();
    let mut c: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    let mut bt = b.clone();
    let mut out = Vec::with_capacity(sequence.len());
    for (s, &k) in sequence.iter().enumerate() {
        let kk = bt.check_vertex(k)?;
        out.push(c[kk].clone());
        if s + 1 == sequence.len() {
            break;
        }
        let eps = signs[s] as i64;
        let ck = c[kk].clone();
        for i in 0..n {
            if i == kk {
                continue;
            }
            let m = pos(eps * bt.entry(kk, i));
            if m > 0 {
                for (ci, cki) in c[i].iter_mut().zip(&ck) {
                    *ci += m * cki;
                }
            }
        }
        for x in c[kk].iter_mut() {
            *x = -*x;
        }
        bt = bt.mutate(k)?;
    }
    Ok(out)
}

/// Seed: exchange matrix with one classical y-variable per vertex.
#[derive(Clone, Debug)]
pub struct Seed {
    pub b: ExchangeMatrix,
    pub y: Vec<ClassicalY>,
}

impl Seed {
    pub fn initial(b: ExchangeMatrix) -> Self {
        let n = b.n();
        let y = (0..n).map(|i| ClassicalY::initial(n, i)).collect();
        Seed { b, y }
    }
}

/// Classical seed mutation at the (1-based) vertex k.
pub fn mutate_classical(seed: &Seed, k: usize) -> Result<Seed, ClusterError> {
    let kk = seed.b.check_vertex(k)?;
    let n = seed.b.n();
    let mut y = Vec::with_capacity(n);
    let yk = &seed.y[kk];
    for i in 0..n {
        if i == kk {
            y.push(yk.inverse());
            continue;
        }
        // y_i' = y_i * y_k^{[b_ki]_+} * (1 + y_k)^{-b_ki}; both branches stay
        // subtraction-free.
        let b_ki = seed.b.entry(kk, i);
        let yi = &seed.y[i];
        let one_plus_num = yk.den.add(&yk.num); // 1 + y_k = (den + num)/den
        let next = if b_ki >= 0 {
            let m = b_ki as u32;
            ClassicalY {
                num: yi.num.mul(&yk.num.pow(m)),
                den: yi.den.mul(&one_plus_num.pow(m)),
            }
        } else {
            let m = (-b_ki) as u32;
            ClassicalY {
                num: yi.num.mul(&one_plus_num.pow(m)),
                den: yi.den.mul(&yk.den.pow(m)),
            }
        };
        y.push(next.reduce_monomial_content());
    }
    Ok(Seed {
        b: seed.b.mutate(k)?,
        y,
    })
}

/// Full mutation history of a sequence, with the c-vector of the mutated
/// variable recorded at each step.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// 1-based mutation sequence.
    pub sequence: Vec<usize>,
    /// Seeds 1..=L+1; seeds[0] is the initial seed.
    pub seeds: Vec<Seed>,
    /// cvectors[t] is the c-vector of y_{k_{t+1}}(t+1).
    pub cvectors: Vec<CVector>,
    /// Period permutation (0-based one-line form), when one exists.
    pub sigma: Option<Vec<usize>>,
}

pub fn run_trajectory(b: &ExchangeMatrix, sequence: &[usize]) -> Result<Trajectory, ClusterError> {
    let mut seeds = vec![Seed::initial(b.clone())];
    let mut cvectors = Vec::with_capacity(sequence.len());
    for &k in sequence {
        let cur = seeds.last().unwrap();
        let kk = cur.b.check_vertex(k)?;
        cvectors.push(c_vector_and_sign(&cur.y[kk])?);
        seeds.push(mutate_classical(cur, k)?);
    }
    let sigma = find_period_sigma(&seeds[0], seeds.last().unwrap());
    Ok(Trajectory {
        sequence: sequence.to_vec(),
        seeds,
        cvectors,
        sigma,
    })
}

/// Period detection: runs the classical trajectory and searches for the
/// lexicographically smallest permutation with b_{s(i)s(j)}(L+1) = b_ij(1)
/// and y_{s(i)}(L+1) = y_i(1).
pub fn detect_period(
    b: &ExchangeMatrix,
    sequence: &[usize],
) -> Result<Option<Vec<usize>>, ClusterError> {
    if sequence.is_empty() {
        return Err(ClusterError::NotAPeriod);
    }
    let traj = run_trajectory(b, sequence)?;
    Ok(traj.sigma)
}

fn find_period_sigma(first: &Seed, last: &Seed) -> Option<Vec<usize>> {
    let n = first.b.n();
    let mut perm: Vec<usize> = (0..n).collect();
    // Lexicographic enumeration of all permutations.
    loop {
        if sigma_matches(first, last, &perm) {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn sigma_matches(first: &Seed, last: &Seed, sigma: &[usize]) -> bool {
    let n = first.b.n();
    for i in 0..n {
        for j in 0..n {
            if last.b.entry(sigma[i], sigma[j]) != first.b.entry(i, j) {
                return false;
            }
        }
    }
    (0..n).all(|i| last.y[sigma[i]].eq_value(&first.y[i]))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Cycle notation for a 0-based one-line permutation, printed 1-based,
/// e.g. "(1 2)"; the identity prints as "id".
pub fn format_cycles(sigma: &[usize]) -> String {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || sigma[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut v = sigma[start];
        while v != start {
            seen[v] = true;
            cycle.push(v);
            v = sigma[v];
        }
        out.push('(');
        out.push_str(
            &cycle
                .iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("id");
    }
    out
}

/// Parsed quiver file: exchange matrix, mutation sequence, optional declared
/// period permutation (1-based).
#[derive(Clone, Debug)]
pub struct QuiverFile {
    pub matrix: ExchangeMatrix,
    pub sequence: Vec<usize>,
    pub sigma: Option<Vec<usize>>,
}

/// Strict parser for the quiver text format: line 1 is n, lines 2..n+1 the
/// rows of B, line n+2 the 1-based mutation sequence, optional line n+3
/// `sigma` followed by the permutation in one-line notation.
pub fn parse_quiver(text: &str) -> Result<QuiverFile, ClusterError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .collect();
    // Trailing blank lines are tolerated; interior blank lines are not.
    let mut upto = lines.len();
    while upto > 0 && lines[upto - 1].1.is_empty() {
        upto -= 1;
    }
    let lines = &lines[..upto];
    let err = |line: usize, msg: &str| ClusterError::Parse {
        line,
        msg: msg.to_string(),
    };
    if lines.is_empty() {
        return Err(err(1, "empty quiver file"));
    }
    for &(no, l) in lines {
        if l.is_empty() {
            return Err(err(no, "blank line inside quiver file"));
        }
    }

    let n: usize = lines[0]
        .1
        .parse()
        .map_err(|_| err(lines[0].0, "expected vertex count"))?;
    if n == 0 {
        return Err(err(lines[0].0, "vertex count must be positive"));
    }
    if lines.len() < n + 2 {
        return Err(err(
            lines.last().unwrap().0,
            &format!("expected {} matrix rows and a mutation sequence", n),
        ));
    }

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (no, l) = lines[1 + i];
        let row: Result<Vec<i64>, _> = l.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| err(no, "expected integer matrix entries"))?;
        if row.len() != n {
            return Err(err(no, &format!("expected {} entries in matrix row", n)));
        }
        rows.push(row);
    }
    let matrix = ExchangeMatrix::new(rows).map_err(|e| match e {
        ClusterError::NotSkewSymmetric { i, j } => ClusterError::Parse {
            line: 1 + i,
            msg: format!("matrix is not skew-symmetric at entry ({}, {})", i, j),
        },
        other => other,
    })?;

    let (no, l) = lines[1 + n];
    let sequence: Result<Vec<usize>, _> = l.split_whitespace().map(str::parse).collect();
    let sequence = sequence.map_err(|_| err(no, "expected 1-based mutation sequence"))?;
    if sequence.is_empty() {
        return Err(err(no, "mutation sequence is empty"));
    }
    for &k in &sequence {
        if k == 0 || k > n {
            return Err(err(no, &format!("vertex {} out of range 1..={}", k, n)));
        }
    }

    let mut sigma = None;
    if lines.len() > n + 2 {
        let (no, l) = lines[n + 2];
        let mut tokens = l.split_whitespace();
        if tokens.next() != Some("sigma") {
            return Err(err(no, "expected `sigma` line or end of file"));
        }
        let perm: Result<Vec<usize>, _> = tokens.map(str::parse).collect();
        let perm = perm.map_err(|_| err(no, "expected permutation in one-line notation"))?;
        if perm.len() != n {
            return Err(err(no, &format!("permutation must list {} entries", n)));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(err(no, "not a permutation of 1..=n"));
            }
            seen[p - 1] = true;
        }
        sigma = Some(perm);
        if lines.len() > n + 3 {
            return Err(err(lines[n + 3].0, "unexpected extra line"));
        }
    }

    Ok(QuiverFile {
        matrix,
        sequence,
        sigma,
    })
}

/// The rank-2 fixture exchange matrix [[0,-1],[1,0]].
pub fn a2_matrix() -> ExchangeMatrix {
    ExchangeMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap()
}

/// The rank-3 fixture exchange matrix [[0,-1,0],[1,0,1],[0,-1,0]].
pub fn a3_matrix() -> ExchangeMatrix {
    ExchangeMatrix::new(vec![vec![0, -1, 0], vec![1, 0, 1], vec![0, -1, 0]]).unwrap()
}

pub const A2_SEQUENCE: [usize; 5] = [1, 2, 1, 2, 1];
pub const A3_SEQUENCE: [usize; 9] = [1, 3, 2, 1, 3, 2, 1, 3, 2];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_vectors_with_tropical_signs_are_c_vectors() {
        for (b, seq) in [
            (a2_matrix(), &A2_SEQUENCE[..]),
            (a3_matrix(), &A3_SEQUENCE[..]),
        ] {
            let traj = run_trajectory(&b, seq).unwrap();
            let signs: Vec<i8> = traj.cvectors[..seq.len() - 1]
                .iter()
                .map(|cv| cv.sign)
                .collect();
            let got = signed_c_vectors(&b, seq, &signs).unwrap();
            let want: Vec<Vec<i64>> = traj.cvectors.iter().map(|cv| cv.c.clone()).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn signed_vectors_with_flipped_first_sign() {
        // flipping the first sign routes the first vector into the second
        let got = signed_c_vectors(&a2_matrix(), &[1, 2, 1], &[-1, 1]).unwrap();
        assert_eq!(got, vec![vec![1, 0], vec![1, 1], vec![-1, 0]]);
    }

    #[test]
    fn matrix_mutation_rank2() {
        let b = a2_matrix();
        let b2 = b.mutate(1).unwrap();
        assert_eq!(b2.rows(), &[vec![0, 1], vec![-1, 0]]);
        assert_eq!(b2.mutate(1).unwrap(), b);
    }

    #[test]
    fn matrix_mutation_rank3_middle_vertex() {
        let b = a3_matrix();
        let b2 = b.mutate(2).unwrap();
        assert_eq!(
            b2.rows(),
            &[vec![0, 1, 0], vec![-1, 0, -1], vec![0, 1, 0]]
        );
    }

    #[test]
    fn vertex_out_of_range() {
        let b = a2_matrix();
        assert_eq!(
            b.mutate(3),
            Err(ClusterError::OutOfRangeVertex { k: 3, n: 2 })
        );
        assert_eq!(
            b.mutate(0),
            Err(ClusterError::OutOfRangeVertex { k: 0, n: 2 })
        );
    }

    #[test]
    fn reject_non_skew_symmetric() {
        let r = ExchangeMatrix::new(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(r, Err(ClusterError::NotSkewSymmetric { i: 1, j: 2 }));
        let r = ExchangeMatrix::new(vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(r, Err(ClusterError::NotSkewSymmetric { i: 1, j: 1 }));
    }

    #[test]
    fn classical_mutation_first_steps() {
        let seed = Seed::initial(a2_matrix());
        let s2 = mutate_classical(&seed, 1).unwrap();
        // slot 1 inverted, slot 2 becomes y2(1 + y1)
        assert!(s2.y[0].eq_value(&ClassicalY::initial(2, 0).inverse()));
        let expect = ClassicalY::from_parts(
            PosPoly::monomial(2, vec![0, 1]).add(&PosPoly::monomial(2, vec![1, 1])),
            PosPoly::one(2),
        );
        assert!(s2.y[1].eq_value(&expect));

        let s3 = mutate_classical(&s2, 2).unwrap();
        // slot 1 is y1^{-1}(1 + y2 + y1 y2)
        let num = PosPoly::monomial(2, vec![0, 0])
            .add(&PosPoly::monomial(2, vec![0, 1]))
            .add(&PosPoly::monomial(2, vec![1, 1]));
        let expect = ClassicalY::from_parts(num, PosPoly::monomial(2, vec![1, 0]));
        assert!(s3.y[0].eq_value(&expect));
    }

    #[test]
    fn involution_on_seeds() {
        let seed = Seed::initial(a3_matrix());
        let once = mutate_classical(&seed, 2).unwrap();
        let twice = mutate_classical(&once, 2).unwrap();
        assert_eq!(twice.b, seed.b);
        for i in 0..3 {
            assert!(twice.y[i].eq_value(&seed.y[i]));
        }
    }

    #[test]
    fn tropicalization_examples() {
        let n = 2;
        // y1^{-1}(1 + y2 + y1 y2) -> (-1, 0)
        let num = PosPoly::monomial(n, vec![0, 0])
            .add(&PosPoly::monomial(n, vec![0, 1]))
            .add(&PosPoly::monomial(n, vec![1, 1]));
        let y = ClassicalY::from_parts(num, PosPoly::monomial(n, vec![1, 0]));
        assert_eq!(y.tropicalize(), vec![-1, 0]);
        assert_eq!(ClassicalY::initial(n, 1).tropicalize(), vec![0, 1]);
    }

    #[test]
    fn tropicalization_is_representative_independent() {
        let n = 2;
        let y = ClassicalY::initial(n, 0);
        let p = PosPoly::one(n)
            .add(&PosPoly::monomial(n, vec![1, 1]))
            .add(&PosPoly::monomial(n, vec![0, 2]));
        let blown = ClassicalY::from_parts(y.num().mul(&p), y.den().mul(&p));
        assert_eq!(blown.tropicalize(), y.tropicalize());
    }

    #[test]
    fn mixed_sign_is_an_error() {
        let n = 2;
        // y1/y2 tropicalizes to (1, -1)
        let y = ClassicalY::from_parts(
            PosPoly::monomial(n, vec![1, 0]),
            PosPoly::monomial(n, vec![0, 1]),
        );
        match c_vector_and_sign(&y) {
            Err(ClusterError::MixedSign { vector }) => assert_eq!(vector, vec![1, -1]),
            other => panic!("expected MixedSign, got {:?}", other),
        }
    }

    #[test]
    fn a2_cvector_table_and_period() {
        let traj = run_trajectory(&a2_matrix(), &A2_SEQUENCE).unwrap();
        let table: Vec<(Vec<i64>, i8)> = traj
            .cvectors
            .iter()
            .map(|cv| (cv.c.clone(), cv.sign))
            .collect();
        assert_eq!(
            table,
            vec![
                (vec![1, 0], 1),
                (vec![0, 1], 1),
                (vec![-1, 0], -1),
                (vec![-1, -1], -1),
                (vec![0, -1], -1),
            ]
        );
        assert_eq!(traj.sigma, Some(vec![1, 0]));
        assert_eq!(format_cycles(&traj.sigma.unwrap()), "(1 2)");
        // final seed is (y2, y1)
        let last = traj.seeds.last().unwrap();
        assert!(last.y[0].eq_value(&ClassicalY::initial(2, 1)));
        assert!(last.y[1].eq_value(&ClassicalY::initial(2, 0)));
    }

    #[test]
    fn a3_cvector_table_and_period() {
        let traj = run_trajectory(&a3_matrix(), &A3_SEQUENCE).unwrap();
        let table: Vec<(Vec<i64>, i8)> = traj
            .cvectors
            .iter()
            .map(|cv| (cv.c.clone(), cv.sign))
            .collect();
        assert_eq!(
            table,
            vec![
                (vec![1, 0, 0], 1),
                (vec![0, 0, 1], 1),
                (vec![0, 1, 0], 1),
                (vec![-1, 0, 0], -1),
                (vec![0, 0, -1], -1),
                (vec![-1, -1, -1], -1),
                (vec![0, -1, -1], -1),
                (vec![-1, -1, 0], -1),
                (vec![0, -1, 0], -1),
            ]
        );
        assert_eq!(traj.sigma, Some(vec![2, 1, 0]));
        assert_eq!(format_cycles(&traj.sigma.unwrap()), "(1 3)");
        // final seed is (y3, y2, y1)
        let last = traj.seeds.last().unwrap();
        assert!(last.y[0].eq_value(&ClassicalY::initial(3, 2)));
        assert!(last.y[1].eq_value(&ClassicalY::initial(3, 1)));
        assert!(last.y[2].eq_value(&ClassicalY::initial(3, 0)));
    }

    #[test]
    fn double_mutation_is_identity_period() {
        let sigma = detect_period(&a2_matrix(), &[2, 2]).unwrap();
        assert_eq!(sigma, Some(vec![0, 1]));
        assert_eq!(format_cycles(&sigma.unwrap()), "id");
    }

    #[test]
    fn non_period_returns_none() {
        let sigma = detect_period(&a2_matrix(), &[1, 2]).unwrap();
        assert_eq!(sigma, None);
    }

    #[test]
    fn series_expansion_matches_geometric() {
        // y2(2) after mutating A2 at 1 is y2(1 + y1): expansion has exactly
        // the terms 1 and y1 relative to its tropical monomial.
        let seed = Seed::initial(a2_matrix());
        let s2 = mutate_classical(&seed, 1).unwrap();
        let exp = s2.y[1].series_expansion(6).unwrap();
        assert_eq!(exp.len(), 2);
        assert_eq!(exp[&vec![0i64, 0]], BigRational::one());
        assert_eq!(exp[&vec![1i64, 0]], BigRational::one());

        // 1/(1 + y1): alternating geometric series
        let y = ClassicalY::from_parts(
            PosPoly::one(2),
            PosPoly::one(2).add(&PosPoly::monomial(2, vec![1, 0])),
        );
        let exp = y.series_expansion(4).unwrap();
        for k in 0..=4i64 {
            let want = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                exp[&vec![k, 0]],
                BigRational::from_integer(BigInt::from(want))
            );
        }
    }

    #[test]
    fn quiver_parse_round_trip() {
        let text = "2\n0 -1\n1 0\n1 2 1 2 1\nsigma 2 1\n";
        let qf = parse_quiver(text).unwrap();
        assert_eq!(qf.matrix, a2_matrix());
        assert_eq!(qf.sequence, vec![1, 2, 1, 2, 1]);
        assert_eq!(qf.sigma, Some(vec![2, 1]));
    }

    #[test]
    fn quiver_parse_errors_carry_line_numbers() {
        let bad_row = "2\n0 -1\n1 0 3\n1 2\n";
        match parse_quiver(bad_row) {
            Err(ClusterError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {:?}", other),
        }
        let not_skew = "2\n0 1\n1 0\n1 2\n";
        match parse_quiver(not_skew) {
            Err(ClusterError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {:?}", other),
        }
        let bad_vertex = "2\n0 -1\n1 0\n1 3\n";
        match parse_quiver(bad_vertex) {
            Err(ClusterError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
        let bad_sigma = "2\n0 -1\n1 0\n1 2\nsigma 2 2\n";
        match parse_quiver(bad_sigma) {
            Err(ClusterError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn acyclicity_flagging() {
        assert!(a2_matrix().is_acyclic());
        assert!(a3_matrix().is_acyclic());
        // oriented 3-cycle
        let cyclic =
            ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        assert!(!cyclic.is_acyclic());
    }
}
