//! Pairwise coupling transform and vector codes with MSR locality.
//!
//! A group of `n_l = s·t` nodes is labelled `(x, y)` with `x ∈ Z_s`,
//! `y ∈ 1..=t`; the `α = s^t` symbols of a node are labelled by
//! `z ∈ Z_s^t`. Starting from `α` independent MDS layers `B(·,·,z)` the
//! transform pairs `B(x, y, z)` with `B(z_y, y, z(x, y))` whenever `x ≠ z_y`,
//! where `z(x, y)` is `z` with coordinate `y` replaced by `x`, and mixes each
//! pair with the matrix `[[1, θ], [θ, 1]]`.
//!
//! Stacking `α` Tamo-Barg layers and coupling every group yields a code whose
//! local codes are MSR codes with `d = n_l - 1`.

use alloc::vec::Vec;

use crate::code_model::{
    decode_with_generator, generator_by_encoding, BoundInputs, Family, LocalityStructure, VectorCode, VectorCodeword,
};
use crate::error::{invalid, Error, Result};
use crate::gf::{GfContext, GfElement};
use crate::gf_linalg::GfMatrix;
use crate::oracle::{lrc_bound, RankProfile};
use crate::poly_crt::Poly;
use crate::tamo_barg::{tb_encode, TbParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PctParams {
    field: GfContext,
    s: usize,
    t: usize,
    theta: GfElement,
}

impl PctParams {
    /// Uses the smallest `θ ∉ {0, 1, -1}`.
    pub fn new(field: GfContext, s: usize, t: usize) -> Result<Self> {
        let theta = field.elements().find(|&v| is_valid_theta(&field, v)).ok_or_else(|| {
            invalid(alloc::format!("GF({}) has no coupling coefficient outside {{0, 1, -1}}", field.order()))
        })?;
        Self::with_theta(field, s, t, theta)
    }

    pub fn with_theta(field: GfContext, s: usize, t: usize, theta: GfElement) -> Result<Self> {
        if s < 2 || t < 2 {
            return Err(invalid("coupling needs s ≥ 2 and t ≥ 2"));
        }
        field.element(theta.value() as u64)?;
        if !is_valid_theta(&field, theta) {
            return Err(invalid(alloc::format!("θ = {theta} must avoid 0, 1 and -1")));
        }
        s.checked_pow(t as u32).filter(|&a| a <= 1 << 20).ok_or_else(|| invalid("s^t is too large"))?;
        Ok(PctParams { field, s, t, theta })
    }

    pub fn field(&self) -> &GfContext {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn theta(&self) -> GfElement {
        self.theta
    }

    pub fn n_l(&self) -> usize {
        self.s * self.t
    }

    /// Local dimension in nodes, `s(t-1)`.
    pub fn r(&self) -> usize {
        self.s * (self.t - 1)
    }

    pub fn alpha(&self) -> usize {
        self.s.pow(self.t as u32)
    }

    pub fn beta(&self) -> usize {
        self.s.pow(self.t as u32 - 1)
    }

    /// `(x, y)` label of a position within the group.
    pub fn label(&self, position: usize) -> (usize, usize) {
        (position % self.s, 1 + position / self.s)
    }

    pub fn position(&self, x: usize, y: usize) -> usize {
        (y - 1) * self.s + x
    }

    /// Digit `z_y` of layer `z`; `z_1` is least significant.
    pub fn digit(&self, z: usize, y: usize) -> usize {
        z / self.s.pow(y as u32 - 1) % self.s
    }

    /// `z(x, y)`: layer `z` with digit `y` replaced by `x`.
    pub fn replace_digit(&self, z: usize, y: usize, x: usize) -> usize {
        let w = self.s.pow(y as u32 - 1);
        z - self.digit(z, y) * w + x * w
    }

    /// Digits `[z_1, …, z_t]`.
    pub fn digits(&self, z: usize) -> Vec<usize> {
        (1..=self.t).map(|y| self.digit(z, y)).collect()
    }

    /// The pair partner `(position, layer)` of a coupled symbol, or `None` on the diagonal `x = z_y`.
    pub fn partner(&self, position: usize, z: usize) -> Option<(usize, usize)> {
        let (x, y) = self.label(position);
        let zy = self.digit(z, y);
        (x != zy).then(|| (self.position(zy, y), self.replace_digit(z, y, x)))
    }
}

fn is_valid_theta(f: &GfContext, v: GfElement) -> bool {
    !v.is_zero() && v != GfElement::ONE && v != f.neg(GfElement::ONE)
}

fn check_group_shape(params: &PctParams, symbols: &[Vec<GfElement>]) -> Result<()> {
    if symbols.len() != params.n_l() {
        return Err(Error::LengthMismatch { expected: params.n_l(), found: symbols.len() });
    }
    if let Some(bad) = symbols.iter().find(|node| node.len() != params.alpha()) {
        return Err(Error::LengthMismatch { expected: params.alpha(), found: bad.len() });
    }
    Ok(())
}

/// Turns uncoupled symbols `B[position][z]` of one group into coupled symbols `A`.
pub fn couple(params: &PctParams, b: &[Vec<GfElement>]) -> Result<Vec<Vec<GfElement>>> {
    check_group_shape(params, b)?;
    let f = &params.field;
    let theta = params.theta;
    let mut a = b.to_vec();
    for p in 0..params.n_l() {
        let (x, y) = params.label(p);
        for z in 0..params.alpha() {
            if let Some((q, w)) = params.partner(p, z) {
                if x < params.digit(z, y) {
                    let (b1, b2) = (b[p][z], b[q][w]);
                    a[p][z] = f.mul_add(b1, theta, b2);
                    a[q][w] = f.mul_add(b2, theta, b1);
                }
            }
        }
    }
    Ok(a)
}

/// Exact inverse of [`couple`].
pub fn uncouple(params: &PctParams, a: &[Vec<GfElement>]) -> Result<Vec<Vec<GfElement>>> {
    check_group_shape(params, a)?;
    let f = &params.field;
    let theta = params.theta;
    let inv_det = f.inv(f.sub(GfElement::ONE, f.mul(theta, theta)))?;
    let mut b = a.to_vec();
    for p in 0..params.n_l() {
        let (x, y) = params.label(p);
        for z in 0..params.alpha() {
            if let Some((q, w)) = params.partner(p, z) {
                if x < params.digit(z, y) {
                    let (a1, a2) = (a[p][z], a[q][w]);
                    b[p][z] = f.mul(f.sub(a1, f.mul(theta, a2)), inv_det);
                    b[q][w] = f.mul(f.sub(a2, f.mul(theta, a1)), inv_det);
                }
            }
        }
    }
    Ok(b)
}

/// The four symbols of one coupled pair: `(A1, A2) = C·(B1, B2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSymbol {
    A1,
    A2,
    B1,
    B2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairValues {
    pub a1: GfElement,
    pub a2: GfElement,
    pub b1: GfElement,
    pub b2: GfElement,
}

impl PairValues {
    pub fn get(&self, s: PairSymbol) -> GfElement {
        match s {
            PairSymbol::A1 => self.a1,
            PairSymbol::A2 => self.a2,
            PairSymbol::B1 => self.b1,
            PairSymbol::B2 => self.b2,
        }
    }

    /// Forward map from the uncoupled pair.
    pub fn from_uncoupled(params: &PctParams, b1: GfElement, b2: GfElement) -> Self {
        let f = &params.field;
        PairValues { a1: f.mul_add(b1, params.theta, b2), a2: f.mul_add(b2, params.theta, b1), b1, b2 }
    }
}

/// Completes a pair from any two of its four symbols.
pub fn pair_recover(params: &PctParams, known: [(PairSymbol, GfElement); 2]) -> Result<PairValues> {
    let f = &params.field;
    let one = GfElement::ONE;
    let neg = |v| f.neg(v);
    let theta = params.theta;
    // Unknowns (A1, A2, B1, B2): A1 - B1 - θB2 = 0, A2 - θB1 - B2 = 0, plus the two knowns.
    let mut rows = alloc::vec![
        alloc::vec![one, GfElement::ZERO, neg(one), neg(theta)],
        alloc::vec![GfElement::ZERO, one, neg(theta), neg(one)],
    ];
    let mut rhs = alloc::vec![GfElement::ZERO, GfElement::ZERO];
    for (sym, v) in known {
        let mut row = alloc::vec![GfElement::ZERO; 4];
        row[sym as usize] = one;
        rows.push(row);
        rhs.push(v);
    }
    let x = GfMatrix::from_rows(&rows, 4)?.solve(&rhs, f)?;
    Ok(PairValues { a1: x[0], a2: x[1], b1: x[2], b2: x[3] })
}

#[derive(Clone, Debug)]
pub struct MsrLocalityParams {
    tb: TbParams,
    pct: PctParams,
}

impl MsrLocalityParams {
    /// `θ` defaults to the smallest valid coefficient.
    pub fn new(
        field: GfContext,
        n: usize,
        n_l: usize,
        r: usize,
        delta: usize,
        k: usize,
        theta: Option<GfElement>,
    ) -> Result<Self> {
        if r + delta - 1 != n_l {
            return Err(invalid(alloc::format!("need n_l = r + δ - 1, got n_l={n_l} r={r} δ={delta}")));
        }
        if n % n_l != 0 {
            return Err(invalid("n_l must divide n"));
        }
        if r == 0 || r >= n_l {
            return Err(invalid("need 1 ≤ r < n_l"));
        }
        let s = n_l - r;
        if r % s != 0 {
            return Err(invalid(alloc::format!("n_l - r = {s} must divide r = {r}")));
        }
        let t = n_l / s;
        let pct = match theta {
            Some(th) => PctParams::with_theta(field, s, t, th)?,
            None => PctParams::new(field, s, t)?,
        };
        let tb = TbParams::new(field, n, k, r, delta)?;
        Ok(MsrLocalityParams { tb, pct })
    }

    pub fn tb(&self) -> &TbParams {
        &self.tb
    }

    pub fn pct(&self) -> &PctParams {
        &self.pct
    }

    pub fn field(&self) -> &GfContext {
        self.tb.field()
    }

    pub fn n(&self) -> usize {
        self.tb.n()
    }

    pub fn n_l(&self) -> usize {
        self.tb.n_l()
    }

    pub fn nu(&self) -> usize {
        self.tb.nu()
    }

    pub fn r(&self) -> usize {
        self.tb.r()
    }

    pub fn delta(&self) -> usize {
        self.tb.delta()
    }

    /// Dimension of each layer.
    pub fn k(&self) -> usize {
        self.tb.k()
    }

    pub fn alpha(&self) -> usize {
        self.pct.alpha()
    }

    pub fn beta(&self) -> usize {
        self.pct.beta()
    }

    /// Repair degree `n_l - 1`.
    pub fn d(&self) -> usize {
        self.n_l() - 1
    }

    /// Scalar dimension `K = kα`.
    pub fn dimension(&self) -> usize {
        self.k() * self.alpha()
    }

    /// Local dimension `rα`.
    pub fn k_local(&self) -> usize {
        self.r() * self.alpha()
    }

    /// Distance of the layer code, `n - k + 1 - (⌈k/r⌉ - 1)(δ - 1)`.
    pub fn d_tb(&self) -> usize {
        lrc_bound(self.n(), self.k(), self.r(), self.delta()).max(0) as usize
    }

    pub fn optimality_precondition_holds(&self) -> bool {
        self.d_tb() <= 2 * self.delta()
    }

    pub fn group_of(&self, node: usize) -> usize {
        node / self.n_l()
    }

    /// Layers `z` with `z_{y0} = x0` for the failed node at `position` of its group.
    pub fn repair_layers(&self, position: usize) -> Vec<usize> {
        let (x0, y0) = self.pct.label(position);
        (0..self.alpha()).filter(|&z| self.pct.digit(z, y0) == x0).collect()
    }

    /// Field symbols downloaded by [`msrloc_repair`].
    pub fn repair_bandwidth(&self) -> usize {
        self.d() * self.beta()
    }
}

/// Layer `z` encodes `msg[z·k..(z+1)·k]`; each group is then coupled.
pub fn msrloc_encode(params: &MsrLocalityParams, msg: &[GfElement]) -> Result<VectorCodeword> {
    let (k, alpha, n, n_l) = (params.k(), params.alpha(), params.n(), params.n_l());
    if msg.len() != k * alpha {
        return Err(Error::LengthMismatch { expected: k * alpha, found: msg.len() });
    }
    let mut b = alloc::vec![alloc::vec![GfElement::ZERO; alpha]; n];
    for z in 0..alpha {
        for (i, v) in tb_encode(&params.tb, &msg[z * k..(z + 1) * k])?.into_iter().enumerate() {
            b[i][z] = v;
        }
    }
    let mut nodes = Vec::with_capacity(n);
    for group in b.chunks(n_l) {
        nodes.extend(couple(&params.pct, group)?);
    }
    VectorCodeword::new(nodes)
}

/// Uncouples every group, giving `B[node][z]`.
pub fn msrloc_uncouple(params: &MsrLocalityParams, codeword: &VectorCodeword) -> Result<Vec<Vec<GfElement>>> {
    if codeword.len() != params.n() {
        return Err(Error::LengthMismatch { expected: params.n(), found: codeword.len() });
    }
    let mut out = Vec::with_capacity(params.n());
    for group in codeword.nodes().chunks(params.n_l()) {
        out.extend(uncouple(&params.pct, group)?);
    }
    Ok(out)
}

/// The `β` symbols `A(x, y, z)` with `z_{y0} = x0` that a helper sends, in layer order.
pub fn msrloc_helper_symbols(
    params: &MsrLocalityParams,
    helper_content: &[GfElement],
    failed: usize,
) -> Result<Vec<GfElement>> {
    if failed >= params.n() {
        return Err(Error::IndexOutOfRange { index: failed, limit: params.n() });
    }
    if helper_content.len() != params.alpha() {
        return Err(Error::LengthMismatch { expected: params.alpha(), found: helper_content.len() });
    }
    Ok(params.repair_layers(failed % params.n_l()).into_iter().map(|z| helper_content[z]).collect())
}

/// Rebuilds `failed` from the [`msrloc_helper_symbols`] of all other nodes in its group.
pub fn msrloc_repair(
    params: &MsrLocalityParams,
    failed: usize,
    helpers: &[(usize, Vec<GfElement>)],
) -> Result<Vec<GfElement>> {
    let (n_l, alpha, beta) = (params.n_l(), params.alpha(), params.beta());
    if failed >= params.n() {
        return Err(Error::IndexOutOfRange { index: failed, limit: params.n() });
    }
    let group = params.group_of(failed);
    let base = group * n_l;
    let mut plane: Vec<Option<&[GfElement]>> = alloc::vec![None; n_l];
    for (h, symbols) in helpers {
        let h = *h;
        if h >= params.n() {
            return Err(Error::IndexOutOfRange { index: h, limit: params.n() });
        }
        if h == failed {
            return Err(Error::SelfHelper(h));
        }
        if params.group_of(h) != group {
            return Err(Error::CrossGroupHelper { helper: h, failed });
        }
        if symbols.len() != beta {
            return Err(Error::LengthMismatch { expected: beta, found: symbols.len() });
        }
        if plane[h - base].replace(symbols).is_some() {
            return Err(Error::DuplicateHelper(h));
        }
    }
    if helpers.len() < n_l - 1 {
        return Err(Error::InsufficientHelpers { needed: n_l - 1, got: helpers.len() });
    }

    let pct = &params.pct;
    let f = params.field();
    let theta = pct.theta();
    let inv_det = f.inv(f.sub(GfElement::ONE, f.mul(theta, theta)))?;
    let inv_theta = f.inv(theta)?;
    let fp = failed - base;
    let (x0, y0) = pct.label(fp);
    let layers = params.repair_layers(fp);
    let slot = |z: usize| layers.binary_search(&z).expect("layer lies in the repair plane");
    let points = params.tb.coset_structure().coset(group).to_vec();
    let a_at = |p: usize, z: usize| plane[p].expect("helper present")[slot(z)];

    let mut out = alloc::vec![GfElement::ZERO; alpha];
    for &z in &layers {
        // Rows other than y0 pair only within the plane, so their B values are available.
        let mut samples = Vec::with_capacity(params.r());
        for p in (0..n_l).filter(|&p| pct.label(p).1 != y0) {
            let b = match pct.partner(p, z) {
                None => a_at(p, z),
                Some((q, w)) => f.mul(f.sub(a_at(p, z), f.mul(theta, a_at(q, w))), inv_det),
            };
            samples.push((points[p], b));
        }
        let local = Poly::interpolate(&samples, f)?;
        out[z] = local.eval(points[fp], f);
        for x in (0..pct.s()).filter(|&x| x != x0) {
            let p = pct.position(x, y0);
            let b_p = local.eval(points[p], f);
            let b_q = f.mul(f.sub(a_at(p, z), b_p), inv_theta);
            out[pct.replace_digit(z, y0, x)] = f.mul_add(b_q, theta, b_p);
        }
    }
    Ok(out)
}

/// A code instance with its generator cached.
#[derive(Clone, Debug)]
pub struct MsrLocalityCode {
    params: MsrLocalityParams,
    generator: GfMatrix,
}

impl MsrLocalityCode {
    pub fn new(params: MsrLocalityParams) -> Result<Self> {
        let mut code = MsrLocalityCode { params, generator: GfMatrix::zeros(0, 0) };
        code.generator = generator_by_encoding(&code)?;
        Ok(code)
    }

    pub fn params(&self) -> &MsrLocalityParams {
        &self.params
    }
}

/// Repair by decoding the message from `surviving` nodes and re-encoding.
pub fn msrloc_fallback_repair(
    code: &MsrLocalityCode,
    failed: usize,
    surviving: &[(usize, Vec<GfElement>)],
) -> Result<Vec<GfElement>> {
    if failed >= code.params.n() {
        return Err(Error::IndexOutOfRange { index: failed, limit: code.params.n() });
    }
    let msg = code.decode(surviving)?;
    Ok(msrloc_encode(&code.params, &msg)?.node(failed).to_vec())
}

pub fn msrloc_generator_matrix(code: &MsrLocalityCode) -> &GfMatrix {
    &code.generator
}

/// Generator of one group's coupled local code: `α` layers of the `[n_l, r]` coset code.
pub fn local_generator(params: &MsrLocalityParams, group: usize) -> Result<GfMatrix> {
    let (r, alpha, n_l) = (params.r(), params.alpha(), params.n_l());
    if group >= params.nu() {
        return Err(Error::IndexOutOfRange { index: group, limit: params.nu() });
    }
    let f = params.field();
    let points = params.tb.coset_structure().coset(group);
    let mut rows = Vec::with_capacity(r * alpha);
    for z in 0..alpha {
        for e in 0..r {
            let mut b = alloc::vec![alloc::vec![GfElement::ZERO; alpha]; n_l];
            for (p, node) in b.iter_mut().enumerate() {
                node[z] = f.pow_u64(points[p], e as u64);
            }
            rows.push(couple(&params.pct, &b)?.concat());
        }
    }
    GfMatrix::from_rows(&rows, n_l * alpha)
}

/// Checks that zeroing the coupled symbols of the nodes `p_set` forces
/// `B(x', y', z') = 0` whenever both `x'` and `z'_{y'}` lie in `P_{y'}`.
/// Exhaustive over a basis of the constrained local subcode.
pub fn check_uncoupled_zeros(params: &MsrLocalityParams, group: usize, p_set: &[(usize, usize)]) -> Result<bool> {
    let pct = &params.pct;
    let (s, t, alpha) = (pct.s(), pct.t(), params.alpha());
    let mut positions = Vec::with_capacity(p_set.len());
    for &(x, y) in p_set {
        if x >= s || y == 0 || y > t {
            return Err(invalid(alloc::format!("({x},{y}) is not a node label")));
        }
        positions.push(pct.position(x, y));
    }
    let g = local_generator(params, group)?;
    let f = params.field();
    let subcode = g.restrict_thick(alpha, &positions)?.left_kernel(f).mul(&g, f)?;
    let in_p = |x: usize, y: usize| p_set.contains(&(x, y));
    for row in 0..subcode.rows() {
        let a: Vec<Vec<GfElement>> = subcode.row(row).chunks(alpha).map(<[_]>::to_vec).collect();
        let b = uncouple(pct, &a)?;
        for p in 0..params.n_l() {
            let (x, y) = pct.label(p);
            if !in_p(x, y) {
                continue;
            }
            for z in 0..alpha {
                if in_p(pct.digit(z, y), y) && !b[p][z].is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl VectorCode for MsrLocalityCode {
    fn family(&self) -> Family {
        Family::MsrLocality
    }

    fn field(&self) -> &GfContext {
        self.params.field()
    }

    fn length(&self) -> usize {
        self.params.n()
    }

    fn alpha(&self) -> usize {
        self.params.alpha()
    }

    fn dimension(&self) -> usize {
        self.params.dimension()
    }

    fn encode(&self, msg: &[GfElement]) -> Result<VectorCodeword> {
        msrloc_encode(&self.params, msg)
    }

    fn locality(&self) -> Option<LocalityStructure> {
        let p = &self.params;
        LocalityStructure::contiguous(p.n(), p.n_l(), p.r(), p.delta()).ok()
    }

    fn bound_inputs(&self) -> BoundInputs {
        let p = &self.params;
        BoundInputs {
            scalar_locality: None,
            local_profile: RankProfile::msr(p.n_l(), p.r(), p.alpha()).ok(),
            msr_locality: Some((p.r(), p.delta())),
            unmet_precondition: (!p.optimality_precondition_holds())
                .then_some("optimality precondition d_TB <= 2*delta unmet"),
        }
    }

    fn generator_matrix(&self) -> Result<GfMatrix> {
        Ok(self.generator.clone())
    }

    fn decode(&self, surviving: &[(usize, Vec<GfElement>)]) -> Result<Vec<GfElement>> {
        decode_with_generator(self.params.field(), &self.generator, self.params.alpha(), surviving)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_rank_profile;
    use crate::subsets::{bits, Subsets};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(v: u64) -> GfElement {
        gf17().element(v).unwrap()
    }

    fn gf17() -> GfContext {
        GfContext::prime(17).unwrap()
    }

    fn instance() -> MsrLocalityParams {
        MsrLocalityParams::new(gf17(), 8, 4, 2, 3, 4, None).unwrap()
    }

    fn random_elems(rng: &mut ChaCha8Rng, f: &GfContext, len: usize) -> Vec<GfElement> {
        (0..len).map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap()).collect()
    }

    fn random_group(rng: &mut ChaCha8Rng, p: &PctParams) -> Vec<Vec<GfElement>> {
        (0..p.n_l()).map(|_| random_elems(rng, p.field(), p.alpha())).collect()
    }

    #[test]
    fn labels_and_digits() {
        let p = PctParams::new(gf17(), 2, 3).unwrap();
        assert_eq!(p.theta(), el(2));
        assert_eq!((p.alpha(), p.beta(), p.n_l(), p.r()), (8, 4, 6, 4));
        assert_eq!(p.label(0), (0, 1));
        assert_eq!(p.label(3), (1, 2));
        assert_eq!(p.position(1, 3), 5);
        assert_eq!(p.digits(6), vec![0, 1, 1]);
        assert_eq!(p.replace_digit(6, 1, 1), 7);
        assert_eq!(p.replace_digit(6, 3, 0), 2);
        for pos in 0..6 {
            for z in 0..8 {
                if let Some((q, w)) = p.partner(pos, z) {
                    assert_eq!(p.partner(q, w), Some((pos, z)));
                }
            }
        }
    }

    #[test]
    fn theta_selection() {
        assert!(PctParams::new(GfContext::prime(3).unwrap(), 2, 2).is_err());
        assert_eq!(PctParams::new(GfContext::binary(2).unwrap(), 2, 2).unwrap().theta(), el(2));
        assert_eq!(PctParams::new(GfContext::prime(5).unwrap(), 2, 2).unwrap().theta(), el(2));
        assert!(PctParams::with_theta(gf17(), 2, 2, el(16)).is_err());
        assert!(PctParams::with_theta(gf17(), 2, 2, el(3)).is_ok());
        assert!(PctParams::with_theta(gf17(), 1, 2, el(3)).is_err());
    }

    #[test]
    fn coupling_round_trip_and_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (s, t) in [(2, 2), (3, 2), (2, 3)] {
            let p = PctParams::new(gf17(), s, t).unwrap();
            for _ in 0..20 {
                let b = random_group(&mut rng, &p);
                let a = couple(&p, &b).unwrap();
                assert_eq!(uncouple(&p, &a).unwrap(), b);
                assert_eq!(couple(&p, &uncouple(&p, &b).unwrap()).unwrap(), b);
                for pos in 0..p.n_l() {
                    for z in 0..p.alpha() {
                        if p.partner(pos, z).is_none() {
                            assert_eq!(a[pos][z], b[pos][z]);
                        }
                    }
                }
            }
            let zero = vec![vec![GfElement::ZERO; p.alpha()]; p.n_l()];
            assert_eq!(couple(&p, &zero).unwrap(), zero);
        }
    }

    #[test]
    fn any_two_of_four() {
        use PairSymbol::*;
        let p = PctParams::new(gf17(), 2, 2).unwrap();
        let f = gf17();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let syms = [A1, A2, B1, B2];
        for _ in 0..50 {
            let v = random_elems(&mut rng, &f, 2);
            let truth = PairValues::from_uncoupled(&p, v[0], v[1]);
            for i in 0..4 {
                for j in i + 1..4 {
                    let known = [(syms[i], truth.get(syms[i])), (syms[j], truth.get(syms[j]))];
                    assert_eq!(pair_recover(&p, known).unwrap(), truth);
                }
            }
        }
        assert!(pair_recover(&p, [(A1, GfElement::ONE), (A1, GfElement::ONE)]).is_err());
    }

    #[test]
    fn instance_parameters() {
        let p = instance();
        assert_eq!((p.pct().s(), p.pct().t()), (2, 2));
        assert_eq!((p.alpha(), p.beta(), p.dimension(), p.d()), (4, 2, 16, 3));
        assert_eq!(p.d_tb(), 3);
        assert!(p.optimality_precondition_holds());
        assert_eq!(p.repair_bandwidth(), 6);
        assert_eq!(p.repair_layers(0), vec![0, 2]);
        assert_eq!(p.repair_layers(3), vec![2, 3]);
        assert!(MsrLocalityParams::new(gf17(), 8, 4, 3, 2, 4, None).is_err());
        assert!(MsrLocalityParams::new(gf17(), 8, 4, 2, 2, 4, None).is_err());
    }

    #[test]
    fn layers_survive_uncoupling() {
        let p = instance();
        let f = gf17();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let msg = random_elems(&mut rng, &f, 16);
        let c = msrloc_encode(&p, &msg).unwrap();
        let b = msrloc_uncouple(&p, &c).unwrap();
        for z in 0..4 {
            let layer = tb_encode(p.tb(), &msg[z * 4..(z + 1) * 4]).unwrap();
            for i in 0..8 {
                assert_eq!(b[i][z], layer[i]);
            }
        }
        assert_eq!(msrloc_encode(&p, &[GfElement::ZERO; 16]).unwrap(), VectorCodeword::zero(8, 4));
    }

    #[test]
    fn bandwidth_optimal_repair_matches_fallback() {
        let code = MsrLocalityCode::new(instance()).unwrap();
        let p = code.params();
        let f = gf17();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..10 {
            let c = msrloc_encode(p, &random_elems(&mut rng, &f, 16)).unwrap();
            for failed in 0..8 {
                let base = failed / 4 * 4;
                let helpers: Vec<(usize, Vec<GfElement>)> = (base..base + 4)
                    .filter(|&h| h != failed)
                    .map(|h| (h, msrloc_helper_symbols(p, c.node(h), failed).unwrap()))
                    .collect();
                assert_eq!(helpers.iter().map(|(_, s)| s.len()).sum::<usize>(), 6);
                let repaired = msrloc_repair(p, failed, &helpers).unwrap();
                assert_eq!(repaired, c.node(failed));
                let surviving: Vec<(usize, Vec<GfElement>)> =
                    (0..8).filter(|&i| i != failed).map(|i| (i, c.node(i).to_vec())).collect();
                assert_eq!(msrloc_fallback_repair(&code, failed, &surviving).unwrap(), repaired);
            }
        }
    }

    #[test]
    fn repair_on_larger_groups() {
        let f = GfContext::prime(13).unwrap();
        // s = 2, t = 3 and s = 3, t = 2 groups.
        for (n, n_l, r, delta, k) in [(12, 6, 4, 3, 6), (12, 6, 3, 4, 4)] {
            let p = MsrLocalityParams::new(f, n, n_l, r, delta, k, None).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(25);
            let c = msrloc_encode(&p, &random_elems(&mut rng, &f, p.dimension())).unwrap();
            for failed in 0..n {
                let base = failed / n_l * n_l;
                let helpers: Vec<(usize, Vec<GfElement>)> = (base..base + n_l)
                    .filter(|&h| h != failed)
                    .map(|h| (h, msrloc_helper_symbols(&p, c.node(h), failed).unwrap()))
                    .collect();
                assert_eq!(msrloc_repair(&p, failed, &helpers).unwrap(), c.node(failed), "n_l={n_l} failed={failed}");
            }
        }
    }

    #[test]
    fn repair_errors() {
        let p = instance();
        let two = vec![GfElement::ZERO; 2];
        let helpers = vec![(1, two.clone()), (2, two.clone())];
        assert_eq!(msrloc_repair(&p, 0, &helpers), Err(Error::InsufficientHelpers { needed: 3, got: 2 }));
        let cross = vec![(1, two.clone()), (2, two.clone()), (4, two.clone())];
        assert_eq!(msrloc_repair(&p, 0, &cross), Err(Error::CrossGroupHelper { helper: 4, failed: 0 }));
        let dup = vec![(1, two.clone()), (1, two.clone()), (2, two.clone())];
        assert_eq!(msrloc_repair(&p, 0, &dup), Err(Error::DuplicateHelper(1)));
        let zero = vec![(1, two.clone()), (2, two.clone()), (3, two)];
        assert_eq!(msrloc_repair(&p, 0, &zero).unwrap(), vec![GfElement::ZERO; 4]);
    }

    #[test]
    fn local_codes_have_msr_rank_profile() {
        let code = MsrLocalityCode::new(instance()).unwrap();
        let f = gf17();
        let g = msrloc_generator_matrix(&code);
        assert_eq!(g.rank(&f), 16);
        let profile = RankProfile::msr(4, 2, 4).unwrap();
        for group in 0..2 {
            let local = local_generator(code.params(), group).unwrap();
            assert_eq!(local.rank(&f), 8);
            assert!(verify_rank_profile(&f, &local, 4, &profile));
            let restricted = g.restrict_thick(4, &(group * 4..group * 4 + 4).collect::<Vec<_>>()).unwrap();
            assert!(verify_rank_profile(&f, &restricted.row_space_basis(&f), 4, &profile));
        }
    }

    #[test]
    fn zeroed_nodes_force_uncoupled_zeros() {
        let p = instance();
        let labels = [(0, 1), (1, 1), (0, 2), (1, 2)];
        assert!(check_uncoupled_zeros(&p, 0, &[]).unwrap());
        for mask in (1..=2).flat_map(|k| Subsets::new(4, k)) {
            let set: Vec<(usize, usize)> = bits(mask).into_iter().map(|i| labels[i]).collect();
            assert!(check_uncoupled_zeros(&p, 0, &set).unwrap(), "{set:?}");
            assert!(check_uncoupled_zeros(&p, 1, &set).unwrap(), "{set:?}");
        }
        assert!(check_uncoupled_zeros(&p, 0, &[(2, 1)]).is_err());
    }
}
