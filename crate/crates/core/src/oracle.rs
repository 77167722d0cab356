//! Exhaustive verification: vector-code minimum distance, rank profiles,
//! the periodic rank sequence `P(s)` and the closed-form distance bounds.
//!
//! Nothing in here uses the structure of a construction beyond its generator
//! matrix, so these routines can be used to check any of the code families.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::code_model::{Family, VectorCode};
use crate::error::{invalid, Error, Result};
use crate::gf::GfContext;
use crate::gf_linalg::GfMatrix;
use crate::subsets::{binomial, bits, Subsets};

/// Ranks `a_1 ≥ a_2 ≥ …` contributed by successive thick columns of a local code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile(Vec<usize>);

impl RankProfile {
    pub fn new(a: Vec<usize>) -> Result<Self> {
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("rank profile must be non-increasing"));
        }
        Ok(RankProfile(a))
    }

    /// Local MBR code with `β = 1`: `α, α-1, …, α-r+1`, then zeros.
    pub fn mbr(n_l: usize, r: usize, alpha: usize) -> Result<Self> {
        if r > n_l || r > alpha {
            return Err(invalid("MBR profile needs r ≤ min(n_l, α)"));
        }
        Self::new((0..n_l).map(|j| if j < r { alpha - j } else { 0 }).collect())
    }

    /// Local MSR code: `α` for the first `r` columns, then zeros.
    pub fn msr(n_l: usize, r: usize, alpha: usize) -> Result<Self> {
        if r > n_l {
            return Err(invalid("MSR profile needs r ≤ n_l"));
        }
        Self::new((0..n_l).map(|j| if j < r { alpha } else { 0 }).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension of a local code with this profile.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// `P(1..=n)`: prefix sums of the profile extended periodically to length `n`.
pub fn p_sequence(a: &RankProfile, n: usize) -> Vec<usize> {
    if a.is_empty() {
        return vec![0; n];
    }
    let mut acc = 0;
    (0..n)
        .map(|i| {
            acc += a.0[i % a.len()];
            acc
        })
        .collect()
}

/// Smallest `y ≥ 1` with `P(y) ≥ x`.
pub fn p_inv(p: &[usize], x: usize) -> Result<usize> {
    if x == 0 {
        return Err(invalid("P^inv is defined for x ≥ 1"));
    }
    p.iter()
        .position(|&v| v >= x)
        .map(|i| i + 1)
        .ok_or_else(|| invalid(alloc::format!("{x} exceeds the total rank {}", p.last().copied().unwrap_or(0))))
}

/// True when `K = P(P^inv(K))`.
pub fn is_rate_optimal(p: &[usize], k: usize) -> bool {
    p_inv(p, k).is_ok_and(|y| p[y - 1] == k)
}

/// Minimum distance of the vector code generated by `g` with `α` symbols per node.
///
/// Scans thick-column subsets from size `n-1` downwards and stops at the first
/// one whose restriction loses rank.
pub fn dmin_oracle(f: &GfContext, g: &GfMatrix, alpha: usize) -> Result<usize> {
    let n = thick_count(g, alpha)?;
    let k = g.rank(f);
    if k == 0 {
        return Err(Error::ZeroDimensional);
    }
    for size in (0..n).rev() {
        for mask in Subsets::new(n, size) {
            if g.restrict_thick(alpha, &bits(mask))?.rank(f) < k {
                return Ok(n - size);
            }
        }
    }
    unreachable!("the empty restriction has rank 0 < k")
}

/// Minimum distance of a code whose nodes are partitioned into `groups`.
///
/// A largest rank-deficient node set is closed, and a closed set meets every
/// group in a closed set of that group. The search therefore runs over one
/// local flat per group, tracking the space of dual vectors that annihilate
/// everything chosen so far. Exact, and much faster than [`dmin_oracle`] when
/// the groups are small.
pub fn dmin_oracle_grouped(f: &GfContext, g: &GfMatrix, alpha: usize, groups: &[Vec<usize>]) -> Result<usize> {
    let n = thick_count(g, alpha)?;
    let mut seen = vec![false; n];
    for &i in groups.iter().flatten() {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, limit: n });
        }
        if core::mem::replace(&mut seen[i], true) {
            return Err(invalid("groups must be disjoint"));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(invalid("groups must cover every node"));
    }
    let basis = g.row_space_basis(f);
    let k = basis.rows();
    if k == 0 {
        return Err(Error::ZeroDimensional);
    }

    let mut blocks = Vec::with_capacity(groups.len());
    for group in groups {
        if group.len() > 20 {
            return Err(invalid("grouped oracle supports groups of at most 20 nodes"));
        }
        let block = basis.restrict_thick(alpha, group)?;
        let is_flat = local_flats(f, &block, alpha, group.len())?;
        blocks.push((block, is_flat));
    }
    let mut cap_after = vec![0; groups.len() + 1];
    for gi in (0..groups.len()).rev() {
        cap_after[gi] = cap_after[gi + 1] + groups[gi].len();
    }

    let mut search = FlatSearch { f, alpha, blocks: &blocks, cap_after: &cap_after, best: 0 };
    search.run(0, GfMatrix::identity(k), 0)?;
    Ok(n - search.best)
}

struct FlatSearch<'a> {
    f: &'a GfContext,
    alpha: usize,
    blocks: &'a [(GfMatrix, Vec<bool>)],
    cap_after: &'a [usize],
    best: usize,
}

/// A local flat that leaves a nonzero dual space, in coordinates of the parent dual.
struct Candidate {
    len: usize,
    kernel: GfMatrix,
}

impl FlatSearch<'_> {
    /// `dual` spans the vectors `c` with `c·G|_S = 0` for the nodes `S` chosen so far.
    fn run(&mut self, gi: usize, dual: GfMatrix, size: usize) -> Result<()> {
        if gi == self.blocks.len() {
            self.best = self.best.max(size);
            return Ok(());
        }
        let (block, is_flat) = &self.blocks[gi];
        let projected = dual.mul(block, self.f)?;
        let m = projected.cols() / self.alpha;
        let columns = (0..m).map(|j| projected.restrict_thick(self.alpha, &[j])).collect::<Result<Vec<_>>>()?;
        let mut found = Vec::new();
        if is_flat[0] {
            found.push(Candidate { len: 0, kernel: GfMatrix::identity(dual.rows()) });
        }
        let walk = SubsetWalk {
            f: self.f,
            columns: &columns,
            is_flat,
            floor: self.best.saturating_sub(size + self.cap_after[gi + 1]),
        };
        walk.extend(0, 0, &GfMatrix::identity(dual.rows()), &mut found)?;
        found.sort_by_key(|c| core::cmp::Reverse(c.len));
        for c in found {
            if size + c.len + self.cap_after[gi + 1] <= self.best {
                break;
            }
            if gi + 1 == self.blocks.len() {
                self.best = size + c.len;
                break;
            }
            self.run(gi + 1, c.kernel.mul(&dual, self.f)?, size + c.len)?;
        }
        Ok(())
    }
}

/// Depth-first walk over subsets of one group, shrinking the dual space one node at a time.
struct SubsetWalk<'a> {
    f: &'a GfContext,
    columns: &'a [GfMatrix],
    is_flat: &'a [bool],
    /// Only flats larger than this can improve the current best.
    floor: usize,
}

impl SubsetWalk<'_> {
    fn extend(&self, from: usize, mask: usize, kernel: &GfMatrix, found: &mut Vec<Candidate>) -> Result<()> {
        let m = self.columns.len();
        let len = mask.count_ones() as usize;
        for j in from..m {
            if len + 1 + (m - j - 1) <= self.floor {
                break;
            }
            let hit = kernel.mul(&self.columns[j], self.f)?;
            let shrink = hit.left_kernel(self.f);
            if shrink.rows() == 0 {
                continue;
            }
            let next = shrink.mul(kernel, self.f)?;
            let grown = mask | 1 << j;
            if self.is_flat[grown] && len + 1 > self.floor {
                found.push(Candidate { len: len + 1, kernel: next.clone() });
            }
            self.extend(j + 1, grown, &next, found)?;
        }
        Ok(())
    }
}

/// Marks which subsets of one group's thick columns are closed.
fn local_flats(f: &GfContext, block: &GfMatrix, alpha: usize, m: usize) -> Result<Vec<bool>> {
    let masks = 1usize << m;
    let mut ranks = vec![0usize; masks];
    for (mask, rank) in ranks.iter_mut().enumerate().skip(1) {
        *rank = block.restrict_thick(alpha, &bits(mask as u64))?.rank(f);
    }
    Ok((0..masks).map(|mask| (0..m).all(|i| mask & (1 << i) != 0 || ranks[mask | (1 << i)] > ranks[mask])).collect())
}

fn thick_count(g: &GfMatrix, alpha: usize) -> Result<usize> {
    if alpha == 0 || g.cols() % alpha != 0 {
        return Err(Error::LengthMismatch { expected: alpha, found: g.cols() });
    }
    let n = g.cols() / alpha;
    if n >= 64 {
        return Err(invalid("subset enumeration supports fewer than 64 nodes"));
    }
    Ok(n)
}

/// `(full, total)`: how many of the `size`-subsets of thick columns carry the full rank of `g`.
pub fn full_rank_subsets(f: &GfContext, g: &GfMatrix, alpha: usize, size: usize) -> Result<(u64, u64)> {
    let n = thick_count(g, alpha)?;
    let k = g.rank(f);
    let mut full = 0;
    for mask in Subsets::new(n, size) {
        if g.restrict_thick(alpha, &bits(mask))?.rank(f) == k {
            full += 1;
        }
    }
    Ok((full, binomial(n, size)))
}

/// Largest subset count [`bound_report`] enumerates for [`BoundReport::decodable_subsets`].
pub const DECODABLE_SUBSET_LIMIT: u64 = 1 << 16;

/// True iff every `i`-subset of thick columns of `g_local` has rank `a_1 + … + a_i`.
pub fn verify_rank_profile(f: &GfContext, g_local: &GfMatrix, alpha: usize, expected: &RankProfile) -> bool {
    let Ok(n_l) = thick_count(g_local, alpha) else {
        return false;
    };
    if expected.len() != n_l {
        return false;
    }
    let p = p_sequence(expected, n_l);
    (1..=n_l).all(|size| {
        Subsets::new(n_l, size)
            .all(|mask| g_local.restrict_thick(alpha, &bits(mask)).is_ok_and(|sub| sub.rank(f) == p[size - 1]))
    })
}

/// Scalar code with locality `r`: `n - k - ⌈k/r⌉ + 2`.
pub fn single_parity_locality_bound(n: usize, k: usize, r: usize) -> i64 {
    n as i64 - k as i64 - k.div_ceil(r) as i64 + 2
}

/// Scalar code with `(r, δ)` locality: `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`.
pub fn lrc_bound(n: usize, k: usize, r: usize, delta: usize) -> i64 {
    n as i64 - k as i64 + 1 - (k.div_ceil(r) as i64 - 1) * (delta as i64 - 1)
}

/// Vector code with uniform rank accumulation: `n - P^inv(K) + 1`.
pub fn rank_profile_bound(n: usize, p_inv_k: usize) -> i64 {
    n as i64 - p_inv_k as i64 + 1
}

/// Vector code with MSR locality: `n - ⌈K/α⌉ + 1 - (⌈K/(αr)⌉ - 1)(δ - 1)`.
pub fn msr_locality_bound(n: usize, k: usize, alpha: usize, r: usize, delta: usize) -> i64 {
    n as i64 - k.div_ceil(alpha) as i64 + 1 - (k.div_ceil(alpha * r) as i64 - 1) * (delta as i64 - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Single-parity locality `r` (scalar, `δ = 2`).
    SingleParityLocality,
    /// Scalar `(r, δ)` locality.
    Lrc,
    /// Rank-accumulation profile.
    RankProfile,
    /// MSR locality.
    MsrLocality,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::SingleParityLocality => "single-parity-locality",
            BoundKind::Lrc => "lrc",
            BoundKind::RankProfile => "rank-profile",
            BoundKind::MsrLocality => "msr-locality",
        }
    }
}

/// How [`bound_report`] measures the minimum distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DminMethod {
    /// [`dmin_oracle`].
    #[default]
    Subsets,
    /// [`dmin_oracle_grouped`] over the code's locality groups.
    Flats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub family: Family,
    pub n: usize,
    pub alpha: usize,
    pub dimension: usize,
    pub field_order: u32,
    pub p_sequence: Option<Vec<usize>>,
    pub p_inv_k: Option<usize>,
    pub bounds: Vec<(BoundKind, i64)>,
    pub measured_dmin: usize,
    /// Measured distance meets the tightest applicable bound.
    pub optimal: bool,
    /// `K = P(P^inv(K))`; `None` for scalar codes.
    pub rate_optimal: Option<bool>,
    /// Measured distance does not exceed any bound.
    pub sound: bool,
    pub notes: Vec<String>,
    /// Full-rank count among the `(n - d_min + 1)`-subsets, when there are at most
    /// [`DECODABLE_SUBSET_LIMIT`] of them.
    pub decodable_subsets: Option<(u64, u64)>,
}

impl BoundReport {
    pub fn bound(&self, kind: BoundKind) -> Option<i64> {
        self.bounds.iter().find(|(k, _)| *k == kind).map(|&(_, v)| v)
    }

    pub fn tightest_bound(&self) -> Option<i64> {
        self.bounds.iter().map(|&(_, v)| v).min()
    }
}

/// Evaluates every bound that applies to `code` and compares with the measured `d_min` of `g`.
pub fn bound_report<C: VectorCode + ?Sized>(code: &C, g: &GfMatrix, method: DminMethod) -> Result<BoundReport> {
    let n = code.length();
    let alpha = code.alpha();
    let k = code.dimension();
    let inputs = code.bound_inputs();
    let f = code.field();

    let measured_dmin = match (method, code.locality()) {
        (DminMethod::Flats, Some(ls)) => dmin_oracle_grouped(f, g, alpha, ls.groups())?,
        _ => dmin_oracle(f, g, alpha)?,
    };

    let mut bounds = Vec::new();
    let mut notes = Vec::new();
    let (mut p_seq, mut p_inv_k, mut rate_optimal) = (None, None, None);
    if let Some((r, delta)) = inputs.scalar_locality {
        if delta == 2 {
            bounds.push((BoundKind::SingleParityLocality, single_parity_locality_bound(n, k, r)));
        }
        bounds.push((BoundKind::Lrc, lrc_bound(n, k, r, delta)));
    }
    if let Some(profile) = &inputs.local_profile {
        let p = p_sequence(profile, n);
        let y = p_inv(&p, k)?;
        bounds.push((BoundKind::RankProfile, rank_profile_bound(n, y)));
        rate_optimal = Some(p[y - 1] == k);
        p_seq = Some(p);
        p_inv_k = Some(y);
    }
    if let Some((r, delta)) = inputs.msr_locality {
        bounds.push((BoundKind::MsrLocality, msr_locality_bound(n, k, alpha, r, delta)));
    }
    if let Some(note) = inputs.unmet_precondition {
        notes.push(String::from(note));
    }

    let size = n - measured_dmin + 1;
    let decodable_subsets =
        if binomial(n, size) <= DECODABLE_SUBSET_LIMIT { Some(full_rank_subsets(f, g, alpha, size)?) } else { None };
    let tightest = bounds.iter().map(|&(_, v)| v).min();
    let sound = bounds.iter().all(|&(_, v)| measured_dmin as i64 <= v);
    Ok(BoundReport {
        family: code.family(),
        n,
        alpha,
        dimension: k,
        field_order: f.order(),
        p_sequence: p_seq,
        p_inv_k,
        bounds,
        measured_dmin,
        optimal: tightest == Some(measured_dmin as i64),
        rate_optimal,
        sound,
        notes,
        decodable_subsets,
    })
}
