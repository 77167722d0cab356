//! Product-matrix MBR codes with `β = 1`.
//!
//! The message fills a symmetric `d × d` matrix `M` whose bottom-right
//! `(d-k) × (d-k)` block is zero. Node `i` stores `ψ_i·M` with
//! `ψ_i = [1, a_i, …, a_i^{d-1}]`, so symbol `j` of node `i` is the evaluation
//! of the `j`-th column polynomial of `M` at `a_i`.

use alloc::vec::Vec;

use crate::code_model::{decode_with_generator, BoundInputs, Family, LocalityStructure, VectorCode, VectorCodeword};
use crate::error::{invalid, Error, Result};
use crate::gf::{GfContext, GfElement};
use crate::gf_linalg::{vandermonde, GfMatrix};
use crate::oracle::RankProfile;

/// Positions `(x, y)` with `x ≤ y` and `x < k` of a `d × d` symmetric matrix whose
/// trailing block vanishes: the upper triangle of the leading `k × k` block row by
/// row, then the `k × (d-k)` block row by row.
pub fn free_entries(k: usize, d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * d - k * k.saturating_sub(1) / 2);
    for x in 0..k {
        out.extend((x..k).map(|y| (x, y)));
    }
    for x in 0..k {
        out.extend((k..d).map(|y| (x, y)));
    }
    out
}

/// `k·d - k(k-1)/2`.
pub fn mbr_file_size(k: usize, d: usize) -> usize {
    k * d - k * k.saturating_sub(1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageMatrix {
    k: usize,
    m: GfMatrix,
}

impl MessageMatrix {
    /// Places `msg` on [`free_entries`] and mirrors it across the diagonal.
    pub fn from_message(msg: &[GfElement], k: usize, d: usize) -> Result<Self> {
        let entries = free_entries(k, d);
        if msg.len() != entries.len() {
            return Err(Error::LengthMismatch { expected: entries.len(), found: msg.len() });
        }
        let mut m = GfMatrix::zeros(d, d);
        for (&(x, y), &v) in entries.iter().zip(msg) {
            m.set(x, y, v);
            m.set(y, x, v);
        }
        Ok(MessageMatrix { k, m })
    }

    pub fn matrix(&self) -> &GfMatrix {
        &self.m
    }

    pub fn d(&self) -> usize {
        self.m.rows()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Reads the free entries back in message order.
    pub fn to_message(&self) -> Vec<GfElement> {
        free_entries(self.k, self.d()).into_iter().map(|(x, y)| self.m.get(x, y)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmMbrParams {
    field: GfContext,
    n: usize,
    k: usize,
    d: usize,
    points: Vec<GfElement>,
}

impl PmMbrParams {
    /// Evaluation points are the first `n` powers of the smallest primitive element.
    pub fn new(field: GfContext, n: usize, k: usize, d: usize) -> Result<Self> {
        if n as u64 > field.group_order() {
            return Err(invalid(alloc::format!("GF({}) has fewer than {n} nonzero points", field.order())));
        }
        let g = field.primitive_nth_root(field.group_order())?;
        let points = (0..n as u64).map(|i| field.pow_u64(g, i)).collect();
        Self::with_points(field, n, k, d, points)
    }

    pub fn with_points(field: GfContext, n: usize, k: usize, d: usize, points: Vec<GfElement>) -> Result<Self> {
        if !(1 <= k && k <= d && d < n) {
            return Err(invalid(alloc::format!("need 1 ≤ k ≤ d ≤ n-1, got n={n} k={k} d={d}")));
        }
        if points.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: points.len() });
        }
        for (i, p) in points.iter().enumerate() {
            field.element(p.value() as u64)?;
            if points[..i].contains(p) {
                return Err(Error::RepeatedAbscissa(p.value()));
            }
        }
        Ok(PmMbrParams { field, n, k, d, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// File size `B`.
    pub fn file_size(&self) -> usize {
        mbr_file_size(self.k, self.d)
    }

    pub fn points(&self) -> &[GfElement] {
        &self.points
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, limit: self.n });
        }
        Ok(())
    }
}

/// `ψ_i·M` for each node.
pub fn pm_encode(params: &PmMbrParams, msg: &[GfElement]) -> Result<VectorCodeword> {
    let mm = MessageMatrix::from_message(msg, params.k, params.d)?;
    encode_message_matrix(&params.field, mm.matrix(), &params.points)
}

/// Evaluates the columns of a `d × d` message matrix at each point.
pub(crate) fn encode_message_matrix(f: &GfContext, m: &GfMatrix, points: &[GfElement]) -> Result<VectorCodeword> {
    let psi = vandermonde(points, m.rows(), f);
    let nodes = psi.mul(m, f)?.row_vecs();
    VectorCodeword::new(nodes)
}

/// The symbol helper `h` sends to repair node `failed`: `c_h·ψ_failedᵀ`.
pub fn pm_helper_symbol(params: &PmMbrParams, helper_content: &[GfElement], failed: usize) -> Result<GfElement> {
    params.check_node(failed)?;
    helper_symbol(&params.field, helper_content, params.points[failed])
}

pub(crate) fn helper_symbol(f: &GfContext, content: &[GfElement], point: GfElement) -> Result<GfElement> {
    let psi = vandermonde(&[point], content.len(), f);
    Ok(psi.mul_vec(content, f)?[0])
}

/// Rebuilds node `failed` from `(helper, symbol)` pairs; the first `d` helpers are used.
pub fn pm_repair(params: &PmMbrParams, failed: usize, helpers: &[(usize, GfElement)]) -> Result<Vec<GfElement>> {
    params.check_node(failed)?;
    for &(h, _) in helpers {
        params.check_node(h)?;
    }
    let helper_points: Vec<(GfElement, GfElement)> = helpers.iter().map(|&(h, s)| (params.points[h], s)).collect();
    let nodes: Vec<usize> = helpers.iter().map(|&(h, _)| h).collect();
    check_helpers(failed, &nodes, params.d)?;
    solve_repair(&params.field, &helper_points[..params.d], params.d)
}

pub(crate) fn check_helpers(failed: usize, helpers: &[usize], d: usize) -> Result<()> {
    for (i, &h) in helpers.iter().enumerate() {
        if h == failed {
            return Err(Error::SelfHelper(h));
        }
        if helpers[..i].contains(&h) {
            return Err(Error::DuplicateHelper(h));
        }
    }
    if helpers.len() < d {
        return Err(Error::InsufficientHelpers { needed: d, got: helpers.len() });
    }
    Ok(())
}

/// Solves `Ψ_H·(M·ψ_fᵀ) = symbols`; by symmetry of `M` the solution is `ψ_f·M`.
pub(crate) fn solve_repair(f: &GfContext, helpers: &[(GfElement, GfElement)], d: usize) -> Result<Vec<GfElement>> {
    let points: Vec<GfElement> = helpers.iter().map(|&(p, _)| p).collect();
    let symbols: Vec<GfElement> = helpers.iter().map(|&(_, s)| s).collect();
    vandermonde(&points, d, f).solve(&symbols, f)
}

/// Recovers the message from the full contents of any nodes whose restriction has rank `B`.
pub fn pm_data_collect(params: &PmMbrParams, nodes: &[(usize, Vec<GfElement>)]) -> Result<Vec<GfElement>> {
    decode_with_generator(&params.field, &pm_generator_matrix(params)?, params.d, nodes)
}

/// `B × nd` generator in message order.
pub fn pm_generator_matrix(params: &PmMbrParams) -> Result<GfMatrix> {
    let b = params.file_size();
    let mut rows = Vec::with_capacity(b);
    let mut msg = alloc::vec![GfElement::ZERO; b];
    for i in 0..b {
        msg[i] = GfElement::ONE;
        rows.push(pm_encode(params, &msg)?.flatten());
        msg[i] = GfElement::ZERO;
    }
    GfMatrix::from_rows(&rows, params.n * params.d)
}

impl VectorCode for PmMbrParams {
    fn family(&self) -> Family {
        Family::PmMbr
    }

    fn field(&self) -> &GfContext {
        &self.field
    }

    fn length(&self) -> usize {
        self.n
    }

    fn alpha(&self) -> usize {
        self.d
    }

    fn dimension(&self) -> usize {
        self.file_size()
    }

    fn encode(&self, msg: &[GfElement]) -> Result<VectorCodeword> {
        pm_encode(self, msg)
    }

    fn locality(&self) -> Option<LocalityStructure> {
        None
    }

    fn bound_inputs(&self) -> BoundInputs {
        BoundInputs {
            scalar_locality: None,
            local_profile: RankProfile::mbr(self.n, self.k, self.d).ok(),
            msr_locality: None,
            unmet_precondition: None,
        }
    }

    fn generator_matrix(&self) -> Result<GfMatrix> {
        pm_generator_matrix(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dmin_oracle, verify_rank_profile};
    use crate::poly_crt::Poly;
    use crate::subsets::{bits, Subsets};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> PmMbrParams {
        PmMbrParams::new(GfContext::prime(11).unwrap(), 5, 3, 4).unwrap()
    }

    fn random_msg(rng: &mut ChaCha8Rng, f: &GfContext, len: usize) -> Vec<GfElement> {
        (0..len).map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap()).collect()
    }

    #[test]
    fn parameters_and_fill_order() {
        let p = example();
        assert_eq!(p.file_size(), 9);
        assert_eq!(free_entries(3, 4), vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (0, 3), (1, 3), (2, 3)]);
        let f = GfContext::prime(11).unwrap();
        let msg: Vec<GfElement> = (1..=9).map(|v| f.from_int(v)).collect();
        let mm = MessageMatrix::from_message(&msg, 3, 4).unwrap();
        assert_eq!(mm.matrix(), &mm.matrix().transpose());
        assert!(mm.matrix().get(3, 3).is_zero());
        assert_eq!(mm.to_message(), msg);
        assert!(MessageMatrix::from_message(&msg[..8], 3, 4).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = GfContext::prime(11).unwrap();
        assert!(PmMbrParams::new(f, 5, 4, 3).is_err());
        assert!(PmMbrParams::new(f, 5, 3, 5).is_err());
        assert!(PmMbrParams::new(f, 11, 3, 4).is_err());
        let pts = vec![f.from_int(1), f.from_int(2), f.from_int(2), f.from_int(3), f.from_int(4)];
        assert_eq!(PmMbrParams::with_points(f, 5, 3, 4, pts), Err(Error::RepeatedAbscissa(2)));
    }

    #[test]
    fn node_symbols_are_column_polynomial_evaluations() {
        let p = example();
        let f = GfContext::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let msg = random_msg(&mut rng, &f, 9);
        let c = pm_encode(&p, &msg).unwrap();
        let mm = MessageMatrix::from_message(&msg, 3, 4).unwrap();
        for j in 0..4 {
            let column = Poly::from_coeffs((0..4).map(|x| mm.matrix().get(x, j)).collect());
            for i in 0..5 {
                assert_eq!(c.node(i)[j], column.eval(p.points()[i], &f));
            }
        }
        assert_eq!(pm_encode(&p, &[GfElement::ZERO; 9]).unwrap(), VectorCodeword::zero(5, 4));
    }

    #[test]
    fn repair_from_every_helper_set() {
        let p = example();
        let f = GfContext::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let c = pm_encode(&p, &random_msg(&mut rng, &f, 9)).unwrap();
            for failed in 0..5 {
                let helpers: Vec<(usize, GfElement)> = (0..5)
                    .filter(|&h| h != failed)
                    .map(|h| (h, pm_helper_symbol(&p, c.node(h), failed).unwrap()))
                    .collect();
                assert_eq!(pm_repair(&p, failed, &helpers).unwrap(), c.node(failed));
            }
        }
    }

    #[test]
    fn repair_errors() {
        let p = example();
        let s = GfElement::ONE;
        assert_eq!(pm_repair(&p, 0, &[(1, s), (2, s), (3, s)]), Err(Error::InsufficientHelpers { needed: 4, got: 3 }));
        assert_eq!(pm_repair(&p, 0, &[(1, s), (2, s), (2, s), (3, s)]), Err(Error::DuplicateHelper(2)));
        assert_eq!(pm_repair(&p, 0, &[(0, s), (1, s), (2, s), (3, s)]), Err(Error::SelfHelper(0)));
        assert!(pm_repair(&p, 7, &[(1, s), (2, s), (3, s), (4, s)]).is_err());
    }

    #[test]
    fn data_collection_from_any_k_nodes() {
        let p = example();
        let f = GfContext::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let msg = random_msg(&mut rng, &f, 9);
        let c = pm_encode(&p, &msg).unwrap();
        for mask in Subsets::new(5, 3) {
            let nodes: Vec<(usize, Vec<GfElement>)> = bits(mask).into_iter().map(|i| (i, c.node(i).to_vec())).collect();
            assert_eq!(pm_data_collect(&p, &nodes).unwrap(), msg);
        }
        let two: Vec<(usize, Vec<GfElement>)> = (0..2).map(|i| (i, c.node(i).to_vec())).collect();
        assert!(matches!(pm_data_collect(&p, &two), Err(Error::Underdetermined { .. })));
    }

    #[test]
    fn generator_has_mbr_rank_profile() {
        let p = example();
        let f = GfContext::prime(11).unwrap();
        let g = pm_generator_matrix(&p).unwrap();
        assert_eq!(g.rank(&f), 9);
        assert!(verify_rank_profile(&f, &g, 4, &RankProfile::mbr(5, 3, 4).unwrap()));
        assert_eq!(dmin_oracle(&f, &g, 4).unwrap(), 3);
    }
}
