//! Scalar `(r, δ)` locally recoverable codes from CRT lifting.
//!
//! Codewords are evaluations over the `n`-th roots of unity, ordered coset by
//! coset, of polynomials spanned by the monomials `x^t` with `t = a·n_l + b`
//! and `b < r`. Restricted to one coset such a polynomial agrees with one of
//! degree below `r`, which gives the local `[n_l, r]` MDS codes.

use alloc::vec::Vec;

use crate::code_model::{BoundInputs, Family, LocalityStructure, VectorCode, VectorCodeword};
use crate::error::{invalid, Error, Result};
use crate::gf::{GfContext, GfElement};
use crate::gf_linalg::GfMatrix;
use crate::poly_crt::{CosetStructure, Poly};

#[derive(Clone, Debug)]
pub struct TbParams {
    cs: CosetStructure,
    k: usize,
    r: usize,
    delta: usize,
    support: Vec<usize>,
}

impl TbParams {
    pub fn new(field: GfContext, n: usize, k: usize, r: usize, delta: usize) -> Result<Self> {
        if r == 0 || delta < 2 {
            return Err(invalid("need r ≥ 1 and δ ≥ 2"));
        }
        let n_l = r + delta - 1;
        if n % n_l != 0 {
            return Err(invalid("n_l must divide n"));
        }
        let cs = CosetStructure::build(field, n, n_l)?;
        let nu = n / n_l;
        if k == 0 || k > r * nu {
            return Err(invalid(alloc::format!("need 1 ≤ k ≤ rν = {}, got k={k}", r * nu)));
        }
        let support = (0..nu).flat_map(|a| (0..r).map(move |b| a * n_l + b)).collect();
        Ok(TbParams { cs, k, r, delta, support })
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

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Exponents allowed in a lifted polynomial, ascending.
    pub fn lifted_support(&self) -> &[usize] {
        &self.support
    }

    /// The `k` smallest lifted exponents; message symbol `j` multiplies `x^{T_msg[j]}`.
    pub fn message_support(&self) -> &[usize] {
        &self.support[..self.k]
    }

    /// `n - max T_msg`, a lower bound on the minimum distance.
    pub fn designed_distance(&self) -> usize {
        self.n() - self.message_support()[self.k - 1]
    }

    /// Evaluation points, coset-major.
    pub fn points(&self) -> Vec<GfElement> {
        self.cs.points()
    }

    pub fn coset_of(&self, position: usize) -> usize {
        position / self.n_l()
    }

    fn check_position(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, limit: self.n() });
        }
        Ok(())
    }
}

pub fn tb_message_polynomial(params: &TbParams, msg: &[GfElement]) -> Result<Poly> {
    if msg.len() != params.k {
        return Err(Error::LengthMismatch { expected: params.k, found: msg.len() });
    }
    let mut coeffs = alloc::vec![GfElement::ZERO; params.n()];
    for (&t, &m) in params.message_support().iter().zip(msg) {
        coeffs[t] = m;
    }
    Ok(Poly::from_coeffs(coeffs))
}

pub fn tb_encode(params: &TbParams, msg: &[GfElement]) -> Result<Vec<GfElement>> {
    Ok(tb_message_polynomial(params, msg)?.evaluate(&params.points(), params.field()))
}

/// Recovers position `erased` by interpolating `r` values from its own coset.
pub fn tb_local_repair(params: &TbParams, erased: usize, helpers: &[(usize, GfElement)]) -> Result<GfElement> {
    params.check_position(erased)?;
    let coset = params.coset_of(erased);
    for (i, &(h, _)) in helpers.iter().enumerate() {
        params.check_position(h)?;
        if h == erased {
            return Err(Error::SelfHelper(h));
        }
        if params.coset_of(h) != coset {
            return Err(Error::CrossGroupHelper { helper: h, failed: erased });
        }
        if helpers[..i].iter().any(|&(o, _)| o == h) {
            return Err(Error::DuplicateHelper(h));
        }
    }
    if helpers.len() < params.r {
        return Err(Error::InsufficientHelpers { needed: params.r, got: helpers.len() });
    }
    let points = params.points();
    let samples: Vec<(GfElement, GfElement)> = helpers[..params.r].iter().map(|&(h, v)| (points[h], v)).collect();
    let local = Poly::interpolate(&samples, params.field())?;
    Ok(local.eval(points[erased], params.field()))
}

/// Erasure decoding by a rank-`k` solve on the surviving positions.
pub fn tb_decode(params: &TbParams, surviving: &[(usize, GfElement)]) -> Result<Vec<GfElement>> {
    let g = tb_generator_matrix(params);
    let nodes: Vec<(usize, Vec<GfElement>)> = surviving.iter().map(|&(i, v)| (i, alloc::vec![v])).collect();
    crate::code_model::decode_with_generator(params.field(), &g, 1, &nodes)
}

/// Row `j` holds the evaluations of `x^{T_msg[j]}`.
pub fn tb_generator_matrix(params: &TbParams) -> GfMatrix {
    let f = params.field();
    let points = params.points();
    let mut g = GfMatrix::zeros(params.k, params.n());
    for (j, &t) in params.message_support().iter().enumerate() {
        for (i, &p) in points.iter().enumerate() {
            g.set(j, i, f.pow_u64(p, t as u64));
        }
    }
    g
}

impl VectorCode for TbParams {
    fn family(&self) -> Family {
        Family::TamoBarg
    }

    fn field(&self) -> &GfContext {
        self.cs.field()
    }

    fn length(&self) -> usize {
        self.n()
    }

    fn alpha(&self) -> usize {
        1
    }

    fn dimension(&self) -> usize {
        self.k
    }

    fn encode(&self, msg: &[GfElement]) -> Result<VectorCodeword> {
        VectorCodeword::from_flat(&tb_encode(self, msg)?, 1)
    }

    fn locality(&self) -> Option<LocalityStructure> {
        LocalityStructure::contiguous(self.n(), self.n_l(), self.r, self.delta).ok()
    }

    fn bound_inputs(&self) -> BoundInputs {
        BoundInputs {
            scalar_locality: Some((self.r, self.delta)),
            local_profile: None,
            msr_locality: None,
            unmet_precondition: None,
        }
    }

    fn generator_matrix(&self) -> Result<GfMatrix> {
        Ok(tb_generator_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_model::certify_locality;
    use crate::subsets::{bits, Subsets};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> TbParams {
        TbParams::new(GfContext::binary(4).unwrap(), 15, 6, 3, 3).unwrap()
    }

    fn random_msg(rng: &mut ChaCha8Rng, f: &GfContext, len: usize) -> Vec<GfElement> {
        (0..len).map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap()).collect()
    }

    #[test]
    fn supports_of_the_15_6_code() {
        let p = example();
        assert_eq!(p.lifted_support(), &[0, 1, 2, 5, 6, 7, 10, 11, 12]);
        assert_eq!(p.message_support(), &[0, 1, 2, 5, 6, 7]);
        assert_eq!(p.designed_distance(), 8);
        let full = TbParams::new(GfContext::binary(4).unwrap(), 15, 9, 3, 3).unwrap();
        assert_eq!(full.message_support(), full.lifted_support());
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = GfContext::binary(4).unwrap();
        assert!(TbParams::new(f, 15, 6, 3, 2).is_err());
        assert!(TbParams::new(f, 15, 10, 3, 3).is_err());
        assert!(TbParams::new(f, 15, 0, 3, 3).is_err());
        assert!(matches!(TbParams::new(GfContext::prime(13).unwrap(), 15, 6, 3, 3), Err(Error::NoRootOfUnity { .. })));
    }

    #[test]
    fn encoding_matches_lifting_of_residues() {
        let p = example();
        let f = *p.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let msg = random_msg(&mut rng, &f, 6);
            let m = tb_message_polynomial(&p, &msg).unwrap();
            let parts = p.coset_structure().split(&m).unwrap();
            assert!(parts.iter().all(|part| part.degree().map_or(true, |d| d < 3)));
            let lifted = p.coset_structure().lift(&parts).unwrap();
            assert_eq!(lifted, m);
            let c = tb_encode(&p, &msg).unwrap();
            for (i, coset) in p.coset_structure().cosets().iter().enumerate() {
                assert_eq!(parts[i].evaluate(coset, &f), c[i * 5..(i + 1) * 5]);
            }
        }
        assert!(tb_encode(&p, &[GfElement::ZERO; 6]).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn local_repair_from_any_three_coset_values() {
        let p = example();
        let f = *p.field();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = tb_encode(&p, &random_msg(&mut rng, &f, 6)).unwrap();
        for erased in 0..15 {
            let base = p.coset_of(erased) * 5;
            let others: Vec<usize> = (base..base + 5).filter(|&i| i != erased).collect();
            for mask in Subsets::new(4, 3) {
                let helpers: Vec<(usize, GfElement)> =
                    bits(mask).into_iter().map(|j| (others[j], c[others[j]])).collect();
                assert_eq!(tb_local_repair(&p, erased, &helpers).unwrap(), c[erased]);
            }
        }
    }

    #[test]
    fn two_erasures_in_one_coset() {
        let p = example();
        let f = *p.field();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = tb_encode(&p, &random_msg(&mut rng, &f, 6)).unwrap();
        let helpers: Vec<(usize, GfElement)> = [7, 8, 9].iter().map(|&i| (i, c[i])).collect();
        assert_eq!(tb_local_repair(&p, 5, &helpers).unwrap(), c[5]);
        assert_eq!(tb_local_repair(&p, 6, &helpers).unwrap(), c[6]);
    }

    #[test]
    fn local_repair_errors() {
        let p = example();
        let v = GfElement::ONE;
        assert_eq!(
            tb_local_repair(&p, 0, &[(1, v), (2, v), (5, v)]),
            Err(Error::CrossGroupHelper { helper: 5, failed: 0 })
        );
        assert_eq!(tb_local_repair(&p, 0, &[(1, v), (2, v)]), Err(Error::InsufficientHelpers { needed: 3, got: 2 }));
        assert_eq!(tb_local_repair(&p, 0, &[(1, v), (1, v), (2, v)]), Err(Error::DuplicateHelper(1)));
    }

    #[test]
    fn constant_codeword_repairs_to_constant() {
        let p = example();
        let mut msg = [GfElement::ZERO; 6];
        msg[0] = GfElement::ONE;
        let c = tb_encode(&p, &msg).unwrap();
        assert!(c.iter().all(|&v| v == GfElement::ONE));
        let helpers = [(11, GfElement::ONE), (12, GfElement::ONE), (14, GfElement::ONE)];
        assert_eq!(tb_local_repair(&p, 10, &helpers).unwrap(), GfElement::ONE);
    }

    #[test]
    fn erasure_decoding() {
        let p = example();
        let f = *p.field();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let msg = random_msg(&mut rng, &f, 6);
        let c = tb_encode(&p, &msg).unwrap();
        let all: Vec<(usize, GfElement)> = c.iter().copied().enumerate().collect();
        assert_eq!(tb_decode(&p, &all).unwrap(), msg);
        for _ in 0..50 {
            let mut positions: Vec<usize> = (0..15).collect();
            for i in 0..8 {
                let j = rng.gen_range(i..15);
                positions.swap(i, j);
            }
            let surviving: Vec<(usize, GfElement)> = positions[..8].iter().map(|&i| (i, c[i])).collect();
            assert_eq!(tb_decode(&p, &surviving).unwrap(), msg);
        }
        let few: Vec<(usize, GfElement)> = (0..5).map(|i| (i * 3, c[i * 3])).collect();
        assert!(matches!(tb_decode(&p, &few), Err(Error::Underdetermined { .. })));
    }

    #[test]
    fn generator_and_local_codes() {
        let p = example();
        let f = *p.field();
        let g = tb_generator_matrix(&p);
        assert_eq!(g.rank(&f), 6);
        for coset in 0..3 {
            for mask in Subsets::new(5, 3) {
                let cols: Vec<usize> = bits(mask).into_iter().map(|j| coset * 5 + j).collect();
                assert_eq!(g.select_columns(&cols).unwrap().rank(&f), 3);
            }
        }
        let ls = p.locality().unwrap();
        assert!(certify_locality(&f, &g, 1, &ls).unwrap());
        let mut broken = g.clone();
        for row in 0..6 {
            broken.set(row, 0, GfElement::ZERO);
        }
        assert!(!certify_locality(&f, &broken, 1, &ls).unwrap());
    }
}
