//! Vocabulary shared by the code families: vector codewords, disjoint
//! locality structures and the [`VectorCode`] interface the oracle consumes.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};
use crate::gf::{GfContext, GfElement};
use crate::gf_linalg::GfMatrix;
use crate::oracle::{self, RankProfile};

/// `n` thick symbols of `α` field elements each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorCodeword {
    nodes: Vec<Vec<GfElement>>,
}

impl VectorCodeword {
    pub fn new(nodes: Vec<Vec<GfElement>>) -> Result<Self> {
        if let Some(first) = nodes.first() {
            if let Some(bad) = nodes.iter().find(|node| node.len() != first.len()) {
                return Err(Error::LengthMismatch { expected: first.len(), found: bad.len() });
            }
        }
        Ok(VectorCodeword { nodes })
    }

    pub fn zero(n: usize, alpha: usize) -> Self {
        VectorCodeword { nodes: alloc::vec![alloc::vec![GfElement::ZERO; alpha]; n] }
    }

    /// Splits a scalar-expanded codeword of length `n·α`.
    pub fn from_flat(flat: &[GfElement], alpha: usize) -> Result<Self> {
        if alpha == 0 || flat.len() % alpha != 0 {
            return Err(Error::LengthMismatch { expected: alpha, found: flat.len() });
        }
        Ok(VectorCodeword { nodes: flat.chunks(alpha).map(<[_]>::to_vec).collect() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alpha(&self) -> usize {
        self.nodes.first().map_or(0, Vec::len)
    }

    pub fn node(&self, i: usize) -> &[GfElement] {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Vec<GfElement>] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec<GfElement>> {
        self.nodes
    }

    pub fn flatten(&self) -> Vec<GfElement> {
        self.nodes.concat()
    }

    /// Number of nonzero thick symbols.
    pub fn weight(&self) -> usize {
        self.nodes.iter().filter(|node| node.iter().any(|v| !v.is_zero())).count()
    }
}

/// A partition of the `n` nodes into equal-size local groups with declared `(r, δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityStructure {
    groups: Vec<Vec<usize>>,
    r: usize,
    delta: usize,
}

impl LocalityStructure {
    pub fn new(n: usize, groups: Vec<Vec<usize>>, r: usize, delta: usize) -> Result<Self> {
        let mut seen = alloc::vec![false; n];
        let size = groups.first().map_or(0, Vec::len);
        for group in &groups {
            if group.len() != size {
                return Err(invalid("local groups must have equal size"));
            }
            for &i in group {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, limit: n });
                }
                if core::mem::replace(&mut seen[i], true) {
                    return Err(invalid("local groups must be disjoint"));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid("local groups must cover every node"));
        }
        Ok(LocalityStructure { groups, r, delta })
    }

    /// Groups of `n_l` consecutive nodes.
    pub fn contiguous(n: usize, n_l: usize, r: usize, delta: usize) -> Result<Self> {
        if n_l == 0 || n % n_l != 0 {
            return Err(invalid("n_l must divide n"));
        }
        Self::new(n, (0..n / n_l).map(|g| (g * n_l..(g + 1) * n_l).collect()).collect(), r, delta)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn group_of(&self, node: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&node))
    }
}

/// Certifies `(r, δ)` locality: every group has at most `r + δ - 1` nodes, its
/// restricted code has dimension at most `r·α`, and minimum distance at least `δ`.
pub fn certify_locality(f: &GfContext, g: &GfMatrix, alpha: usize, ls: &LocalityStructure) -> Result<bool> {
    for group in ls.groups() {
        if group.len() > ls.r() + ls.delta() - 1 {
            return Ok(false);
        }
        let local = g.restrict_thick(alpha, group)?.row_space_basis(f);
        if local.rows() == 0 || local.rows() > ls.r() * alpha {
            return Ok(false);
        }
        if oracle::dmin_oracle(f, &local, alpha)? < ls.delta() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    PmMbr,
    TamoBarg,
    MbrLocality,
    MsrLocality,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::PmMbr => "pm-mbr",
            Family::TamoBarg => "tamo-barg",
            Family::MbrLocality => "mbr-locality",
            Family::MsrLocality => "msr-locality",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pm-mbr" => Ok(Family::PmMbr),
            "tamo-barg" => Ok(Family::TamoBarg),
            "mbr-locality" => Ok(Family::MbrLocality),
            "msr-locality" => Ok(Family::MsrLocality),
            other => Err(invalid(alloc::format!("unknown code family {other:?}"))),
        }
    }
}

/// Which distance bounds apply to a code, and the data they need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundInputs {
    /// `(r, δ)` for scalar locally recoverable codes.
    pub scalar_locality: Option<(usize, usize)>,
    /// Rank profile of the local code, for vector codes.
    pub local_profile: Option<RankProfile>,
    /// `(r, δ)` for codes with MSR locality.
    pub msr_locality: Option<(usize, usize)>,
    /// A precondition of the optimality guarantee that does not hold for this instance.
    pub unmet_precondition: Option<&'static str>,
}

/// A linear vector code with a fixed encoder.
pub trait VectorCode {
    fn family(&self) -> Family;
    fn field(&self) -> &GfContext;
    /// Number of thick symbols `n`.
    fn length(&self) -> usize;
    /// Symbols per node.
    fn alpha(&self) -> usize;
    /// Scalar dimension `K`.
    fn dimension(&self) -> usize;
    fn encode(&self, msg: &[GfElement]) -> Result<VectorCodeword>;
    fn locality(&self) -> Option<LocalityStructure>;
    fn bound_inputs(&self) -> BoundInputs;

    /// `K × nα` matrix mapping messages to scalar-expanded codewords.
    fn generator_matrix(&self) -> Result<GfMatrix> {
        generator_by_encoding(self)
    }

    /// Erasure decoding from any set of surviving nodes whose restriction has rank `K`.
    fn decode(&self, surviving: &[(usize, Vec<GfElement>)]) -> Result<Vec<GfElement>> {
        decode_with_generator(self.field(), &self.generator_matrix()?, self.alpha(), surviving)
    }
}

/// Rows are the encodings of the unit messages.
pub fn generator_by_encoding<C: VectorCode + ?Sized>(code: &C) -> Result<GfMatrix> {
    let k = code.dimension();
    let mut rows = Vec::with_capacity(k);
    let mut msg = alloc::vec![GfElement::ZERO; k];
    for i in 0..k {
        msg[i] = GfElement::ONE;
        rows.push(code.encode(&msg)?.flatten());
        msg[i] = GfElement::ZERO;
    }
    GfMatrix::from_rows(&rows, code.length() * code.alpha())
}

/// Solves `msg · G|_S = contents` for the surviving node set `S`.
pub fn decode_with_generator(
    f: &GfContext,
    g: &GfMatrix,
    alpha: usize,
    surviving: &[(usize, Vec<GfElement>)],
) -> Result<Vec<GfElement>> {
    let mut nodes = Vec::with_capacity(surviving.len());
    let mut rhs = Vec::with_capacity(surviving.len() * alpha);
    for (i, (node, content)) in surviving.iter().enumerate() {
        if content.len() != alpha {
            return Err(Error::LengthMismatch { expected: alpha, found: content.len() });
        }
        if surviving[..i].iter().any(|(other, _)| other == node) {
            return Err(invalid(alloc::format!("node {node} supplied twice")));
        }
        nodes.push(*node);
        rhs.extend_from_slice(content);
    }
    let restricted = g.restrict_thick(alpha, &nodes)?;
    restricted.transpose().solve(&rhs, f)
}
