//! Exactness of `0 → O(W) → O(W₋) ⊕ O(W₊) → O(W₋ ∩ W₊) → 0` for simple
//! Laurent coverings, on truncated monomial-lattice models.
//!
//! Every catalog ring here is a sum of monomial lines: the ring of
//! definition contains `c·μ` iff `v(c) ≥ λ(μ)`. Localizing at `t = T` gives
//! `(A₋)₀ = A₀[T]`, `(A₊)₀ = A₀[T⁻¹]` and the overlap `A₀[T, T⁻¹]`, whose
//! lattices are minima of `λ` over shifts. A lattice unbounded below is
//! killed by completion. All maps preserve monomials, so the complex splits
//! into one small block per monomial, each handled by Smith normal form over
//! `ℤ/p^N`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::presentation::{Presentation, PresentationError, NOT_SHEAFY_DEF};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("not in the sheaf-check catalog: {0}")]
    Catalog(String),
    #[error("unsupported Laurent parameter t = {0} (use 1 or T)")]
    Parameter(String),
    #[error("precision must be positive, got ({0}, {1})")]
    Precision(i64, u32),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Coefficient lattice of one monomial line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    /// The monomial does not occur.
    Absent,
    /// `p^λ ℤ_p`.
    Finite(i64),
    /// Contains `p^{-n}` for every `n`; dies in the completion.
    Unbounded,
}

impl Lattice {
    fn finite(self) -> Option<i64> {
        match self {
            Lattice::Finite(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `ℚ_p⟨T⟩`.
    Disc,
    /// `ℚ_p⟨T, T⁻¹⟩`.
    Annulus,
    /// `ℚ_p[T, T⁻¹, Z]/(Z²)` with `A₀` spanned by `p^|n| Tⁿ`, `p^-|n| Tⁿ Z`.
    NotSheafy,
}

impl Model {
    pub fn from_presentation(p: &Presentation) -> Result<Self, SheafError> {
        let ring = p.ring_string();
        if p.ring_of_def_string() == NOT_SHEAFY_DEF {
            return Ok(Model::NotSheafy);
        }
        match ring.as_str() {
            "Qp<T>" => Ok(Model::Disc),
            "Qp<T,T^-1>" => Ok(Model::Annulus),
            _ => Err(SheafError::Catalog(ring)),
        }
    }

    fn has_z(self) -> bool {
        self == Model::NotSheafy
    }

    /// `λ(Tᵐ Zᶻ)` on `A₀`.
    pub fn base(self, m: i64, z: u8) -> Lattice {
        match (self, z) {
            (Model::Disc, 0) if m >= 0 => Lattice::Finite(0),
            (Model::Disc, _) => Lattice::Absent,
            (Model::Annulus, 0) => Lattice::Finite(0),
            (Model::Annulus, _) => Lattice::Absent,
            (Model::NotSheafy, 0) => Lattice::Finite(m.abs()),
            (Model::NotSheafy, _) => Lattice::Finite(-m.abs()),
        }
    }
}

/// The parameter of the covering `{|t| ≤ 1}`, `{|t| ≥ 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaurentParameter {
    One,
    T,
}

impl LaurentParameter {
    pub fn from_series(t: &Series) -> Result<Self, SheafError> {
        let one = Series::one(t.vars());
        if *t == one {
            return Ok(LaurentParameter::One);
        }
        if t.var_index("T").is_some() && *t == Series::variable(t.vars(), "T").expect("present") {
            return Ok(LaurentParameter::T);
        }
        Err(SheafError::Parameter(t.to_string()))
    }
}

/// Lattices of one monomial in `W`, `W₋`, `W₊`, `W₋ ∩ W₊`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    m: i64,
    z: u8,
    whole: Lattice,
    minus: Lattice,
    plus: Lattice,
    overlap: Lattice,
}

/// `min_{k∈ks} λ(m + k)`, reporting `Unbounded` when the values keep
/// decreasing towards the far end(s) of the search range.
fn shifted_min(model: Model, m: i64, z: u8, ks: impl Iterator<Item = i64>, two_sided: bool) -> Lattice {
    let vals: Vec<(i64, i64)> = ks
        .filter_map(|k| model.base(m + k, z).finite().map(|l| (k, l)))
        .collect();
    let Some(min) = vals.iter().map(|(_, l)| *l).min() else {
        return Lattice::Absent;
    };
    let decreasing_at = |a: Option<&(i64, i64)>, b: Option<&(i64, i64)>| match (a, b) {
        (Some(x), Some(y)) => x.1 == min && x.1 < y.1,
        _ => false,
    };
    let n = vals.len();
    let tail = n >= 2 && decreasing_at(vals.get(n - 1), vals.get(n - 2));
    let head = two_sided && n >= 2 && decreasing_at(vals.first(), vals.get(1));
    if tail || head {
        Lattice::Unbounded
    } else {
        Lattice::Finite(min)
    }
}

fn blocks(model: Model, t: LaurentParameter, d: u32) -> Vec<Block> {
    let d = d as i64;
    let reach = 4 * (d + 2);
    let zs: &[u8] = if model.has_z() { &[0, 1] } else { &[0] };
    let mut out = Vec::new();
    for &z in zs {
        for m in -d..=d {
            let whole = model.base(m, z);
            let (minus, plus, overlap) = match t {
                LaurentParameter::One => (whole, whole, whole),
                LaurentParameter::T => (
                    shifted_min(model, m, z, (0..=reach).map(|k| -k), false),
                    shifted_min(model, m, z, 0..=reach, false),
                    shifted_min(model, m, z, -reach..=reach, true),
                ),
            };
            out.push(Block {
                m,
                z,
                whole,
                minus,
                plus,
                overlap,
            });
        }
    }
    out
}

/// Present in the completed ring of definition.
fn live(l: Lattice) -> Option<i64> {
    l.finite()
}

/// Valuations `< n` of the elementary divisors of `a` over `ℤ/p^n`.
pub fn elementary_divisors(mut a: Vec<Vec<i128>>, p: i128, n: u32) -> Vec<u32> {
    let q = p.pow(n);
    let val = |x: i128| -> u32 {
        let mut x = x.rem_euclid(q);
        if x == 0 {
            return n;
        }
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(q);
        }
    }
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let v = val(a[i][j]);
                if v < n && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(r, i);
        for row in a.iter_mut() {
            row.swap(r, j);
        }
        let pv = p.pow(v);
        let unit = a[r][r] / pv;
        let inv = mod_inverse(unit.rem_euclid(q), q);
        for i in 0..rows {
            if i != r && a[i][r] != 0 {
                let f = ((a[i][r] / pv) % q * inv).rem_euclid(q);
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(q);
                }
            }
        }
        for j in 0..cols {
            if j != r && a[r][j] != 0 {
                let f = ((a[r][j] / pv) % q * inv).rem_euclid(q);
                for row in a.iter_mut() {
                    row[j] = (row[j] - f * row[r]).rem_euclid(q);
                }
            }
        }
        out.push(v);
        r += 1;
    }
    out
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

/// Length of the image of a map given by its elementary divisors.
fn image_length(divisors: &[u32], n: u32) -> u64 {
    divisors.iter().map(|v| (n - v) as u64).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BlockLengths {
    c0: u64,
    c1: u64,
    c2: u64,
    im_eps: u64,
    im_delta: u64,
}

fn block_lengths(b: &Block, p: i128, n: u32) -> BlockLengths {
    let l0 = live(b.whole);
    let l1: Vec<i64> = [b.minus, b.plus].iter().filter_map(|l| live(*l)).collect();
    let idx1: Vec<usize> = [b.minus, b.plus]
        .iter()
        .enumerate()
        .filter(|(_, l)| live(**l).is_some())
        .map(|(i, _)| i)
        .collect();
    let l2 = live(b.overlap);
    let entry = |from: i64, to: i64, sign: i128| -> i128 {
        let e = from - to;
        debug_assert!(e >= 0, "lattice maps are inclusions");
        if e >= n as i64 {
            0
        } else {
            sign * p.pow(e as u32)
        }
    };
    let eps: Vec<Vec<i128>> = match l0 {
        Some(a) => l1.iter().map(|t| vec![entry(a, *t, 1)]).collect(),
        None => vec![],
    };
    let delta: Vec<Vec<i128>> = match l2 {
        Some(c) => vec![idx1
            .iter()
            .zip(&l1)
            .map(|(i, from)| entry(*from, c, if *i == 0 { 1 } else { -1 }))
            .collect()],
        None => vec![],
    };
    let im_eps = if eps.is_empty() || l0.is_none() {
        0
    } else {
        image_length(&elementary_divisors(eps, p, n), n)
    };
    let im_delta = if delta.is_empty() || l1.is_empty() {
        0
    } else {
        image_length(&elementary_divisors(delta, p, n), n)
    };
    let nn = n as u64;
    BlockLengths {
        c0: l0.map_or(0, |_| nn),
        c1: l1.len() as u64 * nn,
        c2: l2.map_or(0, |_| nn),
        im_eps,
        im_delta,
    }
}

fn render_monomial(pi: i64, m: i64, z: u8) -> String {
    let mut parts = Vec::new();
    if pi != 0 {
        parts.push(format!("p^{pi}"));
    }
    match m {
        0 => {}
        1 => parts.push("T".into()),
        _ => parts.push(format!("T^{m}")),
    }
    if z == 1 {
        parts.push("Z".into());
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// A kernel element: nonzero in `O(W)` and zero in both pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    pub element: String,
    /// `p^{-n}·w = (generator of A₀)·T^k` with `k ≥ 0`, for `n = 1..=N`.
    pub minus_decompositions: Vec<String>,
    /// The same with `k ≤ 0`.
    pub plus_decompositions: Vec<String>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub covering: String,
    pub precision: (i64, u32),
    pub injective: bool,
    pub kernel_witness: Option<KernelWitness>,
    pub middle_exact: bool,
    pub defect_witness: Option<String>,
    pub surjective: bool,
    /// `ℤ_p`-lengths of the four truncated terms and of the two images.
    pub lengths: [u64; 6],
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.injective && self.middle_exact && self.surjective
    }

    /// A witness is a proof; a pass is evidence at the stated precision.
    pub fn verdict(&self) -> String {
        match &self.kernel_witness {
            Some(w) if w.verified => format!("not a sheaf: {} restricts to 0 on both pieces", w.element),
            _ if self.exact() => {
                format!("exactness evidence at ({}, {})", self.precision.0, self.precision.1)
            }
            _ => "sequence fails at precision".into(),
        }
    }
}

impl fmt::Display for ExactnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "covering: {}", self.covering)?;
        writeln!(f, "injective: {}", self.injective)?;
        if let Some(w) = &self.kernel_witness {
            writeln!(f, "kernel witness: {} (verified: {})", w.element, w.verified)?;
        }
        writeln!(f, "middle exact: {}", self.middle_exact)?;
        writeln!(f, "surjective: {}", self.surjective)?;
        write!(f, "{}", self.verdict())
    }
}

fn check_precision(n: i64, d: u32) -> Result<u32, SheafError> {
    if n <= 0 || n > 24 || d == 0 {
        return Err(SheafError::Precision(n, d));
    }
    Ok(n as u32)
}

/// Decomposes `p^{-n} T^m Z^z` as `(p^{-n} T^{m-k} Z^z)·T^k` with the first
/// factor a generator of `A₀`, trying `k = 0, ±1, …` in the given direction.
fn decompose(model: Model, n: i64, m: i64, z: u8, sign: i64, reach: i64) -> Option<String> {
    (0..=reach).find_map(|k| {
        let j = m - sign * k;
        match model.base(j, z) {
            Lattice::Finite(l) if -n >= l => {
                let gen = render_monomial(-n, j, z);
                let shift = render_monomial(0, sign * k, 0);
                Some(format!("({gen})*{shift}"))
            }
            _ => None,
        }
    })
}

fn verify_witness(model: Model, b: &Block, n: u32, reach: i64) -> KernelWitness {
    let element = render_monomial(0, b.m, b.z);
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for k in 1..=n as i64 {
        if let Some(s) = decompose(model, k, b.m, b.z, 1, reach) {
            minus.push(s);
        }
        if let Some(s) = decompose(model, k, b.m, b.z, -1, reach) {
            plus.push(s);
        }
    }
    let nonzero = matches!(model.base(b.m, b.z), Lattice::Finite(l) if l < n as i64);
    let verified = nonzero && minus.len() == n as usize && plus.len() == n as usize;
    KernelWitness {
        element,
        minus_decompositions: minus,
        plus_decompositions: plus,
        verified,
    }
}

/// Checks the three-term sequence for the covering `{|t| ≤ 1}, {|t| ≥ 1}` of
/// `Spa(A, A⁺)` on the window `-D..=D` modulo `p^N`.
pub fn simple_laurent(pres: &Presentation, t: &Series, precision: (i64, u32)) -> Result<ExactnessReport, SheafError> {
    let n = check_precision(precision.0, precision.1)?;
    let model = Model::from_presentation(pres)?;
    let param = LaurentParameter::from_series(t)?;
    let p = pres.prime() as i128;
    let all = blocks(model, param, precision.1);
    let lengths: Vec<BlockLengths> = all.par_iter().map(|b| block_lengths(b, p, n)).collect();
    let mut injective = true;
    let mut middle_exact = true;
    let mut surjective = true;
    let mut kernel_block: Option<&Block> = None;
    let mut defect: Option<String> = None;
    let mut totals = [0u64; 6];
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by_key(|i| (all[*i].m.abs(), all[*i].z, all[*i].m));
    for i in order {
        let (b, l) = (&all[i], &lengths[i]);
        for (t, x) in totals.iter_mut().zip([l.c0, l.c1, l.c2, 0, l.im_eps, l.im_delta]) {
            *t += x;
        }
        if l.im_eps < l.c0 {
            injective = false;
            kernel_block.get_or_insert(b);
        }
        if l.c1 - l.im_delta != l.im_eps {
            middle_exact = false;
            defect.get_or_insert_with(|| render_monomial(0, b.m, b.z));
        }
        if l.im_delta < l.c2 {
            surjective = false;
        }
    }
    let kernel_witness = kernel_block.map(|b| verify_witness(model, b, n, 4 * (precision.1 as i64 + 2)));
    let covering = match param {
        LaurentParameter::One => format!("{}: W- = W+ = W (t = 1)", pres.ring_string()),
        LaurentParameter::T => format!("{}: W- = {{|T| <= 1}}, W+ = {{|T| >= 1}}", pres.ring_string()),
    };
    Ok(ExactnessReport {
        covering,
        precision,
        injective,
        kernel_witness,
        middle_exact,
        defect_witness: defect,
        surjective,
        lengths: totals,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuzverRow {
    pub n: u32,
    /// `p^{-n} Z = (p^{-n} T^{-n} Z)·Tⁿ ∈ A₀[T]`.
    pub minus: String,
    /// `p^{-n} Z = (p^{-n} Tⁿ Z)·T^{-n} ∈ A₀[T⁻¹]`.
    pub plus: String,
    /// Why `Z ∉ pⁿ A₀`.
    pub not_divisible: String,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuzverReport {
    pub rows: Vec<BuzverRow>,
}

impl BuzverReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }
}

/// Exact monomial product `(π₁, m₁, z₁)·(π₂, m₂, z₂)`, or `None` for `Z²`.
fn monomial_mul(a: (i64, i64, u8), b: (i64, i64, u8)) -> Option<(i64, i64, u8)> {
    (a.2 + b.2 <= 1).then_some((a.0 + b.0, a.1 + b.1, a.2 + b.2))
}

fn in_a0(x: (i64, i64, u8)) -> bool {
    matches!(Model::NotSheafy.base(x.1, x.2), Lattice::Finite(l) if x.0 >= l)
}

/// Certificates that `Z` dies on both halves of `{|T| ≤ 1} ∪ {|T| ≥ 1}` of
/// the non-sheafy ring while staying nonzero, for `n = 0..=n_max`.
pub fn buzver_witness(n_max: u32) -> BuzverReport {
    let rows = (0..=n_max)
        .map(|n| {
            let n = n as i64;
            let target = (-n, 0, 1u8);
            let gen_minus = (-n, -n, 1u8);
            let gen_plus = (-n, n, 1u8);
            let ok_minus = in_a0(gen_minus) && monomial_mul(gen_minus, (0, n, 0)) == Some(target);
            let ok_plus = in_a0(gen_plus) && monomial_mul(gen_plus, (0, -n, 0)) == Some(target);
            // Z = pⁿ·w forces w = p^{-n} Z, whose coefficient misses λ(Z) = 0.
            let ok_c = n == 0 || !in_a0(target);
            let not_divisible = if n == 0 {
                "Z = p^0*T^0*Z is a generator of A0".to_string()
            } else {
                format!("Z = p^{n}*(p^-{n}*Z) and v(p^-{n}) = -{n} < 0 = lambda(Z)")
            };
            BuzverRow {
                n: n as u32,
                minus: format!("({})*{}", render_monomial(-n, -n, 1), render_monomial(0, n, 0)),
                plus: format!("({})*{}", render_monomial(-n, n, 1), render_monomial(0, -n, 0)),
                not_divisible,
                verified: ok_minus && ok_plus && ok_c,
            }
        })
        .collect();
    BuzverReport { rows }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictnessReport {
    /// Least `m` with `p^m S₀ ⊆ A₀`, if at most `m_max`.
    pub m: Option<i64>,
    pub m_max: i64,
    /// A monomial where `S₀` is unbounded relative to `A₀`.
    pub failure: Option<String>,
}

/// Searches `m ≤ m_max` with `p^m S₀ ⊆ A₀` where `S₀ = (A₋)₀ ∩ (A₊)₀`.
pub fn stably_uniform_strictness(
    pres: &Presentation,
    t: &Series,
    precision: (i64, u32),
    m_max: i64,
) -> Result<StrictnessReport, SheafError> {
    check_precision(precision.0, precision.1)?;
    let model = Model::from_presentation(pres)?;
    let param = LaurentParameter::from_series(t)?;
    let mut need = 0i64;
    let mut failure = None;
    let mut all = blocks(model, param, precision.1);
    all.sort_by_key(|b| (b.m.abs(), b.z, b.m));
    for b in all {
        let Some(a) = b.whole.finite() else { continue };
        let bounds: Vec<i64> = [b.minus, b.plus].iter().filter_map(|l| l.finite()).collect();
        match bounds.into_iter().max() {
            Some(s) => need = need.max(a - s),
            None => {
                failure.get_or_insert_with(|| render_monomial(0, b.m, b.z));
            }
        }
    }
    let m = (failure.is_none() && need <= m_max).then_some(need);
    Ok(StrictnessReport { m, m_max, failure })
}
