//! Vector codes whose local codes are product-matrix MBR codes.
//!
//! Each of the `ν` groups owns a symmetric `d × d` message matrix `M^(s)`.
//! Lifting column `j` of all `ν` matrices across the cosets gives a polynomial
//! `M_j(x)`; forcing its high-degree coefficients to vanish ties the groups
//! together. The forbidden coefficients are linear forms in the matrix
//! entries, and the code's message space is the kernel of those forms.

use alloc::string::String;
use alloc::vec::Vec;

use crate::code_model::{
    decode_with_generator, generator_by_encoding, BoundInputs, Family, LocalityStructure, VectorCode, VectorCodeword,
};
use crate::error::{invalid, Error, Result};
use crate::gf::{GfContext, GfElement};
use crate::gf_linalg::GfMatrix;
use crate::oracle::{is_rate_optimal, p_inv, p_sequence, RankProfile};
use crate::pm_mbr::{check_helpers, encode_message_matrix, helper_symbol, mbr_file_size, solve_repair, MessageMatrix};
use crate::poly_crt::CosetStructure;

#[derive(Clone, Debug)]
pub struct MbrLocalityParams {
    cs: CosetStructure,
    r: usize,
    d: usize,
    k: usize,
    mu: usize,
    rho: usize,
    p_inv_rho: usize,
    profile: RankProfile,
    p_seq: Vec<usize>,
}

impl MbrLocalityParams {
    pub fn new(field: GfContext, n: usize, n_l: usize, r: usize, d: usize, k: usize) -> Result<Self> {
        if !(1 <= r && r <= d && d < n_l) {
            return Err(invalid(alloc::format!("need 1 ≤ r ≤ d ≤ n_l-1, got n_l={n_l} r={r} d={d}")));
        }
        if n % n_l != 0 {
            return Err(invalid("n_l must divide n"));
        }
        let nu = n / n_l;
        let k_local = mbr_file_size(r, d);
        let profile = RankProfile::mbr(n_l, r, d)?;
        let p_seq = p_sequence(&profile, n);
        if k < k_local || k > nu * k_local {
            return Err(invalid(alloc::format!("need K_l = {k_local} ≤ K ≤ νK_l = {}, got K={k}", nu * k_local)));
        }
        if !is_rate_optimal(&p_seq, k) {
            return Err(Error::NotRateOptimal {
                k,
                candidates: nearest_rate_optimal(&p_seq, k, k_local, nu * k_local),
            });
        }
        let cs = CosetStructure::build(field, n, n_l)?;
        let mu = (k - 1) / k_local;
        let rho = k - mu * k_local;
        let p_inv_rho = p_inv(&p_seq, rho)?;
        Ok(MbrLocalityParams { cs, r, d, k, mu, rho, p_inv_rho, profile, p_seq })
    }

    pub fn field(&self) -> &GfContext {
        self.cs.field()
    }

    pub fn coset_structure(&self) -> &CosetStructure {
        &self.cs
    }

    pub fn n(&self) -> usize {
        self.cs.n()
    }

    pub fn n_l(&self) -> usize {
        self.cs.n_l()
    }

    pub fn nu(&self) -> usize {
        self.cs.nu()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Local distance `n_l - r + 1`.
    pub fn delta(&self) -> usize {
        self.n_l() - self.r + 1
    }

    /// Scalar dimension `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Local dimension `K_l = rd - r(r-1)/2`.
    pub fn k_local(&self) -> usize {
        mbr_file_size(self.r, self.d)
    }

    /// `(μ, ρ)` with `K = μ·K_l + ρ` and `1 ≤ ρ ≤ K_l`.
    pub fn decomposition(&self) -> (usize, usize) {
        (self.mu, self.rho)
    }

    pub fn p_inv_rho(&self) -> usize {
        self.p_inv_rho
    }

    pub fn profile(&self) -> &RankProfile {
        &self.profile
    }

    pub fn p_sequence(&self) -> &[usize] {
        &self.p_seq
    }

    pub fn p_inv_k(&self) -> usize {
        p_inv(&self.p_seq, self.k).expect("K is within the total rank")
    }

    pub fn group_of(&self, node: usize) -> usize {
        node / self.n_l()
    }
}

/// Rate-optimal dimensions in `[lo, hi]` closest to `k`.
fn nearest_rate_optimal(p: &[usize], k: usize, lo: usize, hi: usize) -> Vec<usize> {
    let valid: Vec<usize> = p.iter().copied().filter(|&v| v >= lo && v <= hi).collect();
    let Some(best) = valid.iter().map(|&v| v.abs_diff(k)).min() else {
        return Vec::new();
    };
    let mut out: Vec<usize> = valid.into_iter().filter(|&v| v.abs_diff(k) == best).collect();
    out.dedup();
    out
}

/// Highest degree allowed in the lifted polynomial of each column.
pub fn degree_caps(params: &MbrLocalityParams) -> Vec<usize> {
    let base = params.mu * params.n_l();
    (0..params.d)
        .map(|j| if j < params.p_inv_rho { base + params.d - 1 } else { base + params.p_inv_rho - 1 })
        .collect()
}

/// Exponents that can appear in the lifted polynomial of column `j`.
pub fn lifted_exponents(params: &MbrLocalityParams, j: usize) -> Vec<usize> {
    let width = if j < params.r { params.d } else { params.r };
    (0..params.nu()).flat_map(|a| (0..width).map(move |b| a * params.n_l() + b)).collect()
}

/// One forbidden coefficient: `Σ_s e^(s)_a · m^(s)_{x,y} = 0` from column `column`, exponent `t = a·n_l + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub column: usize,
    pub t: usize,
    pub a: usize,
    pub b: usize,
    /// Matrix entry after symmetric canonicalisation, `x ≤ y`.
    pub entry: (usize, usize),
}

impl Dependency {
    /// `e0_a*m0_{x,y} + e1_a*m1_{x,y} + … = 0`.
    pub fn render(&self, nu: usize) -> String {
        let (x, y) = self.entry;
        let terms: Vec<String> = (0..nu).map(|s| alloc::format!("e{s}_{}*m{s}_{{{x},{y}}}", self.a)).collect();
        alloc::format!("{} = 0", terms.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct DependencySystem {
    raw: Vec<Dependency>,
    unique: Vec<usize>,
    matrix: GfMatrix,
    kernel: GfMatrix,
}

impl DependencySystem {
    /// Every forbidden coefficient, columns descending and exponents descending within a column.
    pub fn raw(&self) -> &[Dependency] {
        &self.raw
    }

    /// First occurrence of each distinct constraint row.
    pub fn unique(&self) -> impl Iterator<Item = &Dependency> {
        self.unique.iter().map(|&i| &self.raw[i])
    }

    pub fn unique_count(&self) -> usize {
        self.unique.len()
    }

    /// Distinct constraint rows over the `ν·K_l` free entries.
    pub fn matrix(&self) -> &GfMatrix {
        &self.matrix
    }

    /// `K × νK_l` encoder: reduced-echelon basis of the solution space.
    pub fn kernel(&self) -> &GfMatrix {
        &self.kernel
    }

    /// `(column, dependencies)` for every column with at least one dependency.
    pub fn by_column(&self) -> Vec<(usize, Vec<&Dependency>)> {
        let mut out: Vec<(usize, Vec<&Dependency>)> = Vec::new();
        for dep in &self.raw {
            match out.last_mut() {
                Some((c, deps)) if *c == dep.column => deps.push(dep),
                _ => out.push((dep.column, alloc::vec![dep])),
            }
        }
        out
    }
}

/// Index of free entry `(x, y)`, `x ≤ y`, in one group's message.
fn entry_index(r: usize, d: usize, (x, y): (usize, usize)) -> usize {
    // Mirrors `free_entries`: the r×r upper triangle, then the r×(d-r) block.
    if y < r {
        x * r - x * x.saturating_sub(1) / 2 + (y - x)
    } else {
        mbr_file_size(r, r) + x * (d - r) + (y - r)
    }
}

pub fn build_dependency_system(params: &MbrLocalityParams) -> Result<DependencySystem> {
    let (r, d, n_l, nu) = (params.r, params.d, params.n_l(), params.nu());
    let k_local = params.k_local();
    let caps = degree_caps(params);
    let mut raw = Vec::new();
    for j in (0..d).rev() {
        for t in lifted_exponents(params, j).into_iter().rev().filter(|&t| t > caps[j]) {
            let (a, b) = (t / n_l, t % n_l);
            raw.push(Dependency { column: j, t, a, b, entry: (j.min(b), j.max(b)) });
        }
    }

    let f = params.field();
    let mut rows: Vec<Vec<GfElement>> = Vec::new();
    let mut unique = Vec::new();
    for (i, dep) in raw.iter().enumerate() {
        let mut row = alloc::vec![GfElement::ZERO; nu * k_local];
        let idx = entry_index(r, d, dep.entry);
        for s in 0..nu {
            row[s * k_local + idx] = params.cs.idempotent_coeff(s, dep.a);
        }
        if !rows.contains(&row) {
            rows.push(row);
            unique.push(i);
        }
    }
    let matrix = GfMatrix::from_rows(&rows, nu * k_local)?;
    let kernel = matrix.null_space(f);
    if kernel.rows() != params.k {
        return Err(Error::KernelDimension { expected: params.k, found: kernel.rows() });
    }
    Ok(DependencySystem { raw, unique, matrix, kernel })
}

/// A constructed code: parameters, dependency system and cached generator.
#[derive(Clone, Debug)]
pub struct MbrLocalityCode {
    params: MbrLocalityParams,
    system: DependencySystem,
    generator: GfMatrix,
}

impl MbrLocalityCode {
    pub fn new(params: MbrLocalityParams) -> Result<Self> {
        let system = build_dependency_system(&params)?;
        let mut code = MbrLocalityCode { params, system, generator: GfMatrix::zeros(0, 0) };
        code.generator = generator_by_encoding(&code)?;
        Ok(code)
    }

    pub fn params(&self) -> &MbrLocalityParams {
        &self.params
    }

    pub fn system(&self) -> &DependencySystem {
        &self.system
    }

    /// The `ν` symmetric message matrices for `msg`.
    pub fn message_matrices(&self, msg: &[GfElement]) -> Result<Vec<MessageMatrix>> {
        let p = &self.params;
        if msg.len() != p.k {
            return Err(Error::LengthMismatch { expected: p.k, found: msg.len() });
        }
        let vars = self.system.kernel.vec_mul(msg, p.field())?;
        vars.chunks(p.k_local()).map(|chunk| MessageMatrix::from_message(chunk, p.r, p.d)).collect()
    }
}

pub fn mbrloc_encode(code: &MbrLocalityCode, msg: &[GfElement]) -> Result<VectorCodeword> {
    let p = &code.params;
    let mut nodes = Vec::with_capacity(p.n());
    for (s, mm) in code.message_matrices(msg)?.iter().enumerate() {
        nodes.extend(encode_message_matrix(p.field(), mm.matrix(), p.cs.coset(s))?.into_nodes());
    }
    VectorCodeword::new(nodes)
}

/// The symbol a same-group helper sends to repair `failed`.
pub fn mbrloc_helper_symbol(code: &MbrLocalityCode, helper_content: &[GfElement], failed: usize) -> Result<GfElement> {
    let p = &code.params;
    if failed >= p.n() {
        return Err(Error::IndexOutOfRange { index: failed, limit: p.n() });
    }
    helper_symbol(p.field(), helper_content, node_point(p, failed))
}

fn node_point(p: &MbrLocalityParams, node: usize) -> GfElement {
    p.cs.coset(node / p.n_l())[node % p.n_l()]
}

/// Rebuilds `failed` from `d` single-symbol contributions of nodes in its group.
pub fn mbrloc_local_repair(
    code: &MbrLocalityCode,
    failed: usize,
    helpers: &[(usize, GfElement)],
) -> Result<Vec<GfElement>> {
    let p = &code.params;
    if failed >= p.n() {
        return Err(Error::IndexOutOfRange { index: failed, limit: p.n() });
    }
    for &(h, _) in helpers {
        if h >= p.n() {
            return Err(Error::IndexOutOfRange { index: h, limit: p.n() });
        }
        if p.group_of(h) != p.group_of(failed) {
            return Err(Error::CrossGroupHelper { helper: h, failed });
        }
    }
    let nodes: Vec<usize> = helpers.iter().map(|&(h, _)| h).collect();
    check_helpers(failed, &nodes, p.d)?;
    let samples: Vec<(GfElement, GfElement)> = helpers[..p.d].iter().map(|&(h, s)| (node_point(p, h), s)).collect();
    solve_repair(p.field(), &samples, p.d)
}

pub fn mbrloc_decode(code: &MbrLocalityCode, surviving: &[(usize, Vec<GfElement>)]) -> Result<Vec<GfElement>> {
    decode_with_generator(code.params.field(), &code.generator, code.params.d, surviving)
}

pub fn mbrloc_generator_matrix(code: &MbrLocalityCode) -> &GfMatrix {
    &code.generator
}

impl VectorCode for MbrLocalityCode {
    fn family(&self) -> Family {
        Family::MbrLocality
    }

    fn field(&self) -> &GfContext {
        self.params.field()
    }

    fn length(&self) -> usize {
        self.params.n()
    }

    fn alpha(&self) -> usize {
        self.params.d
    }

    fn dimension(&self) -> usize {
        self.params.k
    }

    fn encode(&self, msg: &[GfElement]) -> Result<VectorCodeword> {
        mbrloc_encode(self, msg)
    }

    fn locality(&self) -> Option<LocalityStructure> {
        let p = &self.params;
        LocalityStructure::contiguous(p.n(), p.n_l(), p.r, p.delta()).ok()
    }

    fn bound_inputs(&self) -> BoundInputs {
        BoundInputs {
            scalar_locality: None,
            local_profile: Some(self.params.profile.clone()),
            msr_locality: None,
            unmet_precondition: None,
        }
    }

    fn generator_matrix(&self) -> Result<GfMatrix> {
        Ok(self.generator.clone())
    }

    fn decode(&self, surviving: &[(usize, Vec<GfElement>)]) -> Result<Vec<GfElement>> {
        mbrloc_decode(self, surviving)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::certify_locality;
    use crate::oracle::verify_rank_profile;
    use crate::pm_mbr::free_entries;
    use crate::poly_crt::Poly;
    use crate::subsets::{bits, Subsets};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf13() -> GfContext {
        GfContext::prime(13).unwrap()
    }

    fn example_params() -> MbrLocalityParams {
        MbrLocalityParams::new(gf13(), 12, 6, 3, 4, 13).unwrap()
    }

    fn random_msg(rng: &mut ChaCha8Rng, f: &GfContext, len: usize) -> Vec<GfElement> {
        (0..len).map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap()).collect()
    }

    #[test]
    fn entry_index_follows_free_entry_order() {
        for (r, d) in [(1, 1), (1, 4), (3, 4), (3, 3), (2, 5), (4, 7)] {
            for (i, &e) in free_entries(r, d).iter().enumerate() {
                assert_eq!(entry_index(r, d, e), i, "r={r} d={d} entry={e:?}");
            }
        }
    }

    #[test]
    fn example_parameters() {
        let p = example_params();
        assert_eq!(p.k_local(), 9);
        assert_eq!(p.delta(), 4);
        assert_eq!(p.decomposition(), (1, 4));
        assert_eq!(p.p_inv_rho(), 1);
        assert_eq!(p.p_inv_k(), 7);
        assert_eq!(degree_caps(&p), vec![9, 6, 6, 6]);
        assert_eq!(lifted_exponents(&p, 3), vec![0, 1, 2, 6, 7, 8]);
        assert_eq!(lifted_exponents(&p, 2), vec![0, 1, 2, 3, 6, 7, 8, 9]);
    }

    #[test]
    fn parameter_validation() {
        let f = gf13();
        assert!(MbrLocalityParams::new(f, 12, 5, 3, 4, 13).is_err());
        assert!(MbrLocalityParams::new(f, 12, 6, 3, 6, 13).is_err());
        assert!(MbrLocalityParams::new(f, 12, 6, 3, 4, 8).is_err());
        assert!(MbrLocalityParams::new(f, 12, 6, 3, 4, 19).is_err());
        assert_eq!(
            MbrLocalityParams::new(f, 12, 6, 3, 4, 14).unwrap_err(),
            Error::NotRateOptimal { k: 14, candidates: vec![13] }
        );
        assert_eq!(
            MbrLocalityParams::new(f, 12, 6, 3, 4, 17).unwrap_err(),
            Error::NotRateOptimal { k: 17, candidates: vec![16, 18] }
        );
        assert!(matches!(
            MbrLocalityParams::new(GfContext::prime(11).unwrap(), 12, 6, 3, 4, 13),
            Err(Error::NoRootOfUnity { .. })
        ));
    }

    #[test]
    fn example_dependency_table() {
        let p = example_params();
        let sys = build_dependency_system(&p).unwrap();
        assert_eq!(sys.raw().len(), 8);
        assert_eq!(sys.unique_count(), 5);
        assert_eq!(sys.kernel().rows(), 13);
        let counts: Vec<(usize, usize)> = sys.by_column().iter().map(|(c, deps)| (*c, deps.len())).collect();
        assert_eq!(counts, vec![(3, 2), (2, 3), (1, 3)]);
        let column3: Vec<String> = sys.by_column()[0].1.iter().map(|d| d.render(2)).collect();
        assert_eq!(column3, vec!["e0_1*m0_{2,3} + e1_1*m1_{2,3} = 0", "e0_1*m0_{1,3} + e1_1*m1_{1,3} = 0"]);
        let entries: Vec<(usize, usize)> = sys.unique().map(|d| d.entry).collect();
        assert_eq!(entries, vec![(2, 3), (1, 3), (2, 2), (1, 2), (1, 1)]);
        assert!(sys.raw().iter().all(|d| d.a == 1));
    }

    #[test]
    fn unconstrained_and_single_group_dimensions() {
        let f = gf13();
        let full = build_dependency_system(&MbrLocalityParams::new(f, 12, 6, 3, 4, 18).unwrap()).unwrap();
        assert_eq!(full.raw().len(), 0);
        assert_eq!(full.kernel(), &GfMatrix::identity(18));
        let single = MbrLocalityParams::new(f, 12, 6, 3, 4, 9).unwrap();
        assert_eq!(single.decomposition(), (0, 9));
        assert!(degree_caps(&single).iter().all(|&c| c < 6));
        assert_eq!(build_dependency_system(&single).unwrap().kernel().rows(), 9);
    }

    #[test]
    fn column_words_have_capped_degree() {
        let code = MbrLocalityCode::new(example_params()).unwrap();
        let p = code.params();
        let f = *p.field();
        let points = p.coset_structure().points();
        let caps = degree_caps(p);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c = mbrloc_encode(&code, &random_msg(&mut rng, &f, 13)).unwrap();
            for j in 0..4 {
                let samples: Vec<(GfElement, GfElement)> = (0..12).map(|i| (points[i], c.node(i)[j])).collect();
                let poly = Poly::interpolate(&samples, &f).unwrap();
                assert!(poly.degree().map_or(true, |deg| deg <= caps[j]), "column {j}");
            }
        }
        assert_eq!(mbrloc_encode(&code, &[GfElement::ZERO; 13]).unwrap(), VectorCodeword::zero(12, 4));
    }

    #[test]
    fn every_node_repairs_from_every_helper_set() {
        let code = MbrLocalityCode::new(example_params()).unwrap();
        let f = gf13();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = mbrloc_encode(&code, &random_msg(&mut rng, &f, 13)).unwrap();
        for failed in 0..12 {
            let base = failed / 6 * 6;
            let others: Vec<usize> = (base..base + 6).filter(|&i| i != failed).collect();
            for mask in Subsets::new(5, 4) {
                let helpers: Vec<(usize, GfElement)> = bits(mask)
                    .into_iter()
                    .map(|j| (others[j], mbrloc_helper_symbol(&code, c.node(others[j]), failed).unwrap()))
                    .collect();
                assert_eq!(mbrloc_local_repair(&code, failed, &helpers).unwrap(), c.node(failed));
            }
        }
        let cross = [(1, GfElement::ONE), (2, GfElement::ONE), (3, GfElement::ONE), (6, GfElement::ONE)];
        assert_eq!(mbrloc_local_repair(&code, 0, &cross), Err(Error::CrossGroupHelper { helper: 6, failed: 0 }));
    }

    #[test]
    fn decoding_round_trip() {
        let code = MbrLocalityCode::new(example_params()).unwrap();
        let f = gf13();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let msg = random_msg(&mut rng, &f, 13);
        let c = mbrloc_encode(&code, &msg).unwrap();
        let all: Vec<(usize, Vec<GfElement>)> = (0..12).map(|i| (i, c.node(i).to_vec())).collect();
        assert_eq!(mbrloc_decode(&code, &all).unwrap(), msg);
        let three: Vec<(usize, Vec<GfElement>)> = all[..3].to_vec();
        assert!(matches!(mbrloc_decode(&code, &three), Err(Error::Underdetermined { .. })));
    }

    #[test]
    fn groups_are_mbr_local_codes() {
        let code = MbrLocalityCode::new(example_params()).unwrap();
        let f = gf13();
        let g = mbrloc_generator_matrix(&code);
        assert_eq!(g.rank(&f), 13);
        let ls = code.locality().unwrap();
        assert!(certify_locality(&f, g, 4, &ls).unwrap());
        for group in ls.groups() {
            let local = g.restrict_thick(4, group).unwrap();
            assert_eq!(local.rank(&f), 9);
            assert!(verify_rank_profile(&f, &local.row_space_basis(&f), 4, code.params().profile()));
        }
        let kernel = code.system().kernel();
        for s in 0..2 {
            let cols: Vec<usize> = (s * 9..(s + 1) * 9).collect();
            assert_eq!(kernel.select_columns(&cols).unwrap().rank(&f), 9);
        }
    }
}
