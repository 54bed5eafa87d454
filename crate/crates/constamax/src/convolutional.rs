//! Unit-memory convolutional codes lifted from block parity-check matrices.
//!
//! A parity-check matrix H of a block code C is split into consecutive row
//! blocks H_0, ..., H_m; padding each block to κ = rows(H_0) rows gives the
//! polynomial generator matrix G(D) = H̃_0 + H̃_1 D + ... + H̃_m D^m of a
//! convolutional code V with κ rows. The certified object is the dual V⊥,
//! whose parameters (n, n-κ, γ; m, d_f) are pinned by the distances of the
//! block pieces: min{d_0 + d_m, d} <= d_f(V⊥) <= d, together with the
//! generalized Singleton bound. V⊥'s generator is never materialized for
//! certification; a direct syndrome-trellis search confirms d_f at smoke
//! scale.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::blockcodes::{
    build_family, code_from_defining_set, BlockFamily, CodeError, CodeRecord, ConstacyclicCode,
    FamilyTag,
};
use crate::cosets::{orbit, CongruenceClass, CosetProfile};
use crate::distance::{
    certify_code_mds, min_distance_exact, CertValue, DistanceCertificate, DistanceError,
};
use crate::field::ExtensionTower;
use crate::matrix::MatrixQ;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("bad row split: {0}")]
    RowCounts(String),
    #[error("rank precondition failed: {0}")]
    RankPrecondition(String),
    #[error("index out of the family's admissible range: {0}")]
    IndexRange(String),
    #[error("family precondition failed: {0}")]
    FamilyPrecondition(String),
    #[error("work budget exceeded")]
    Budget,
    #[error("distance certification did not produce an exact value for {0}")]
    Undecided(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

// ---------------------------------------------------------------------------
// polynomial matrices in the delay variable
// ---------------------------------------------------------------------------

/// Matrix over GF(q)[D], stored as one coefficient matrix per degree.
#[derive(Clone)]
pub struct PolyMatrixD {
    terms: Vec<MatrixQ>,
}

impl PolyMatrixD {
    pub fn new(terms: Vec<MatrixQ>) -> PolyMatrixD {
        assert!(!terms.is_empty());
        let (r, c) = (terms[0].rows(), terms[0].cols());
        assert!(terms.iter().all(|t| t.rows() == r && t.cols() == c));
        PolyMatrixD { terms }
    }
    pub fn rows(&self) -> usize {
        self.terms[0].rows()
    }
    pub fn cols(&self) -> usize {
        self.terms[0].cols()
    }
    pub fn term(&self, d: usize) -> Option<&MatrixQ> {
        self.terms.get(d)
    }
    pub fn memory(&self) -> usize {
        // highest degree with a nonzero coefficient matrix
        (0..self.terms.len()).rev().find(|&d| !self.terms[d].is_zero()).unwrap_or(0)
    }
    /// Row degree γ_i = max_j deg g_ij.
    pub fn row_degree(&self, i: usize) -> usize {
        (0..self.terms.len())
            .rev()
            .find(|&d| self.terms[d].row(i).iter().any(|&v| v != 0))
            .unwrap_or(0)
    }
    /// Overall constraint length γ = Σ γ_i.
    pub fn degree(&self) -> usize {
        (0..self.rows()).map(|i| self.row_degree(i)).sum()
    }
    /// Coefficients as [row][col][degree] integer arrays.
    pub fn nested_coeffs(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| self.terms.iter().map(|t| t.at(i, j) as u64).collect())
                    .collect()
            })
            .collect()
    }
}

/// Consecutive row blocks of H, with each block padded at the bottom to κ
/// rows.
pub struct SplitParity {
    pub pieces: Vec<MatrixQ>,
    pub padded: Vec<MatrixQ>,
    pub kappa: usize,
}

/// Split H into disjoint row blocks. The first block must be the largest
/// (κ = rows of H_0) and each block must have full row rank.
pub fn split_parity(h: &MatrixQ, row_counts: &[usize]) -> Result<SplitParity, ConvError> {
    if row_counts.is_empty() || row_counts.iter().sum::<usize>() != h.rows() {
        return Err(ConvError::RowCounts(format!(
            "row counts {row_counts:?} do not sum to {} rows",
            h.rows()
        )));
    }
    if row_counts.iter().any(|&c| c == 0) {
        return Err(ConvError::RowCounts("empty block".into()));
    }
    let kappa = row_counts[0];
    if row_counts.iter().any(|&c| c > kappa) {
        return Err(ConvError::RowCounts(format!(
            "first block ({kappa} rows) is not maximal in {row_counts:?}"
        )));
    }
    let mut pieces = Vec::with_capacity(row_counts.len());
    let mut start = 0usize;
    for &c in row_counts {
        pieces.push(h.submatrix_rows(start, c));
        start += c;
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.rank() != p.rows() {
            return Err(ConvError::RankPrecondition(format!(
                "block {i} has rank {} < {} rows",
                p.rank(),
                p.rows()
            )));
        }
    }
    let padded = pieces
        .iter()
        .map(|p| {
            if p.rows() == kappa {
                p.clone()
            } else {
                let zero = MatrixQ::zeros(p.ctx().clone(), kappa - p.rows(), p.cols());
                MatrixQ::vstack(&[p, &zero])
            }
        })
        .collect();
    Ok(SplitParity { pieces, padded, kappa })
}

/// Generalized Singleton bound (n-k)(⌊γ/k⌋ + 1) + γ + 1.
pub fn generalized_singleton(n: u64, k: u64, gamma: u64) -> u64 {
    assert!(k >= 1);
    (n - k) * (gamma / k + 1) + gamma + 1
}

/// Free-distance squeeze for a unit-memory lift: d0/d1 are the distances of
/// the codes killed by the memory and constant blocks, d2 the full block
/// distance. Lower bounds stay valid when d0/d1 are themselves lower bounds.
pub fn free_distance_squeeze(d0: u64, d1: u64, d2: u64, singleton_bound: u64) -> (u64, u64) {
    let lower = (d0 + d1).min(d2);
    let upper = d2.min(singleton_bound);
    (lower, upper)
}

// ---------------------------------------------------------------------------
// the certified convolutional object
// ---------------------------------------------------------------------------

/// Which theorem family produced a convolutional code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvFamily {
    MainI,
    MainII,
    MainIII,
    MainIIIA,
    MainIIIB,
    MainIV,
    MainV,
    MainVIa,
    MainVIb,
    Custom,
}

impl ConvFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ConvFamily::MainI => "mainI",
            ConvFamily::MainII => "mainII",
            ConvFamily::MainIII => "mainIII",
            ConvFamily::MainIIIA => "mainIIIA",
            ConvFamily::MainIIIB => "mainIIIB",
            ConvFamily::MainIV => "mainIV",
            ConvFamily::MainV => "mainV",
            ConvFamily::MainVIa => "mainVIa",
            ConvFamily::MainVIb => "mainVIb",
            ConvFamily::Custom => "custom",
        }
    }
}

/// A certified unit-memory convolutional code, described through its dual:
/// G(D) (the lifted encoder of V) serves as the polynomial parity check of
/// the object of interest V⊥ with parameters (n, k, γ; m, d_f).
pub struct ConvCode {
    pub family: ConvFamily,
    pub g: PolyMatrixD,
    pub n: u64,
    pub k: u64,
    pub gamma: u64,
    pub memory: u64,
    pub df_lower: u64,
    pub df_upper: u64,
    pub gsb: u64,
    pub mds: bool,
    pub row_counts: Vec<usize>,
    pub c2: ConstacyclicCode,
    pub c1: ConstacyclicCode,
    pub c0: ConstacyclicCode,
    pub cert_full: DistanceCertificate,
    pub cert_head: DistanceCertificate,
    pub cert_tail: DistanceCertificate,
}

impl std::fmt::Debug for ConvCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}; {}, {}..{}){} [{}]",
            self.n,
            self.k,
            self.gamma,
            self.memory,
            self.df_lower,
            self.df_upper,
            if self.mds { " MDS" } else { "" },
            self.family.name()
        )
    }
}

impl ConvCode {
    /// The certified free distance when the squeeze interval is a point.
    pub fn df_exact(&self) -> Option<u64> {
        (self.df_lower == self.df_upper).then_some(self.df_lower)
    }

    pub fn singleton_defect(&self) -> Option<u64> {
        self.df_exact().map(|d| self.gsb - d)
    }
}

/// Serialization record with the published field names.
#[derive(Debug, Clone, Serialize)]
pub struct ConvRecord {
    pub family: String,
    pub c2: CodeRecord,
    pub c1: CodeRecord,
    pub c0: CodeRecord,
    pub row_counts: Vec<usize>,
    pub g_coeffs: Vec<Vec<Vec<u64>>>,
    pub n: u64,
    pub k: u64,
    pub gamma: u64,
    pub memory: u64,
    pub df_lower: u64,
    pub df_upper: u64,
    pub gsb: u64,
    pub mds_flag: bool,
}

impl ConvRecord {
    pub fn of(c: &ConvCode) -> ConvRecord {
        ConvRecord {
            family: c.family.name().to_string(),
            c2: CodeRecord::of(&c.c2),
            c1: CodeRecord::of(&c.c1),
            c0: CodeRecord::of(&c.c0),
            row_counts: c.row_counts.clone(),
            g_coeffs: c.g.nested_coeffs(),
            n: c.n,
            k: c.k,
            gamma: c.gamma,
            memory: c.memory,
            df_lower: c.df_lower,
            df_upper: c.df_upper,
            gsb: c.gsb,
            mds_flag: c.mds,
        }
    }
}

/// Certify a block distance exactly; for MDS families the rank-exhaustion
/// certificate is preferred, falling back to the exact search.
fn exact_distance(
    code: &ConstacyclicCode,
    tower: &ExtensionTower,
    expect_mds: bool,
    budget: u64,
) -> Result<DistanceCertificate, ConvError> {
    if expect_mds {
        let cert = certify_code_mds(code, tower, budget)?;
        if cert.is_exact() {
            return Ok(cert);
        }
    }
    let cert = min_distance_exact(code, tower, budget)?;
    Ok(cert)
}

/// Lift the nested triple (C2 ⊂ C1-side pieces) into a unit-memory code:
/// G(D) = H̃_{C1} + H̃_{C0} D, where the stacked [H_{C1}; H_{C0}] must be a
/// full parity check of C2. Distances of all three pieces drive the
/// free-distance squeeze of V⊥.
pub fn lift_unit_memory(
    c2: ConstacyclicCode,
    c1: ConstacyclicCode,
    c0: ConstacyclicCode,
    tower: &ExtensionTower,
    family: ConvFamily,
    c2_is_mds: bool,
    budget: u64,
) -> Result<ConvCode, ConvError> {
    let n = c2.n();
    let h_head = c1.parity_check_matrix(tower)?;
    let h_tail = c0.parity_check_matrix(tower)?;
    if h_head.rows() < h_tail.rows() {
        return Err(ConvError::RankPrecondition(format!(
            "head block has {} rows < tail block {} rows",
            h_head.rows(),
            h_tail.rows()
        )));
    }
    let h = MatrixQ::vstack(&[&h_head, &h_tail]);
    // the stacked matrix must be a parity check of C2 of full rank n - k2
    let expect_rank = n - c2.dim();
    if h.rows() != expect_rank || h.rank() != expect_rank {
        return Err(ConvError::RankPrecondition(format!(
            "stacked parity has {} rows of rank {}, expected {}",
            h.rows(),
            h.rank(),
            expect_rank
        )));
    }
    if !h.mul(&c2.generator_matrix().transpose()).is_zero() {
        return Err(ConvError::RankPrecondition(
            "stacked parity does not annihilate the full code".into(),
        ));
    }
    let split = split_parity(&h, &[h_head.rows(), h_tail.rows()])?;
    let g = PolyMatrixD::new(split.padded.clone());
    let kappa = split.kappa as u64;
    let gamma = g.degree() as u64;
    debug_assert_eq!(gamma as usize, h_tail.rows());
    let memory = g.memory() as u64;

    let cert_full = exact_distance(&c2, tower, c2_is_mds, budget)?;
    let d_full = cert_full
        .value
        .exact()
        .ok_or_else(|| ConvError::Undecided("full code".into()))?;
    let cert_head = exact_distance(&c1, tower, false, budget)?;
    let cert_tail = exact_distance(&c0, tower, false, budget)?;
    // lower bounds suffice for the squeeze's lower end
    let d_head = cert_head.value.lower();
    let d_tail = cert_tail.value.lower();

    let kdual = n as u64 - kappa;
    let gsb = generalized_singleton(n as u64, kdual, gamma);
    let (df_lower, df_upper) = free_distance_squeeze(d_tail, d_head, d_full, gsb);
    let mds = df_lower == df_upper && df_upper == gsb;
    Ok(ConvCode {
        family,
        g,
        n: n as u64,
        k: kdual,
        gamma,
        memory,
        df_lower,
        df_upper,
        gsb,
        mds,
        row_counts: vec![h_head.rows(), h_tail.rows()],
        c2,
        c1,
        c0,
        cert_full,
        cert_head,
        cert_tail,
    })
}

/// Degenerate memory-0 lift: the whole parity check in one block, so V⊥ is
/// the block code itself.
pub fn lift_block_degenerate(
    c2: ConstacyclicCode,
    tower: &ExtensionTower,
    budget: u64,
) -> Result<ConvCode, ConvError> {
    let h = c2.parity_check_matrix(tower)?;
    let n = c2.n() as u64;
    let split = split_parity(&h, &[h.rows()])?;
    let g = PolyMatrixD::new(split.padded.clone());
    let cert_full = min_distance_exact(&c2, tower, budget)?;
    let d_full = cert_full
        .value
        .exact()
        .ok_or_else(|| ConvError::Undecided("full code".into()))?;
    let kdual = n - h.rows() as u64;
    let gsb = generalized_singleton(n, kdual, 0);
    Ok(ConvCode {
        family: ConvFamily::Custom,
        g,
        n,
        k: kdual,
        gamma: 0,
        memory: 0,
        df_lower: d_full,
        df_upper: d_full.min(gsb),
        gsb,
        mds: d_full == gsb,
        row_counts: vec![h.rows()],
        c2: c2.clone(),
        c1: c2.clone(),
        c0: c2,
        cert_full: cert_full.clone(),
        cert_head: cert_full.clone(),
        cert_tail: cert_full,
    })
}

// ---------------------------------------------------------------------------
// named convolutional families
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvFamilySpec {
    MainI { i: u64 },
    MainII { i: u64 },
    MainIII { i: u64 },
    MainIIIA { i: u64 },
    MainIIIB { i: u64 },
    MainIV { i: u64, c1: u64, c2: u64 },
    MainV,
    MainVIa,
    MainVIb,
}

/// Claimed tuple (n, k, gamma, memory, df...) for report validation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvClaim {
    pub n: u64,
    pub k: u64,
    pub gamma: u64,
    pub memory: u64,
    pub df_lower: u64,
    pub df_exact: bool,
    pub mds: bool,
}

impl ConvFamilySpec {
    pub fn family(&self) -> ConvFamily {
        match self {
            ConvFamilySpec::MainI { .. } => ConvFamily::MainI,
            ConvFamilySpec::MainII { .. } => ConvFamily::MainII,
            ConvFamilySpec::MainIII { .. } => ConvFamily::MainIII,
            ConvFamilySpec::MainIIIA { .. } => ConvFamily::MainIIIA,
            ConvFamilySpec::MainIIIB { .. } => ConvFamily::MainIIIB,
            ConvFamilySpec::MainIV { .. } => ConvFamily::MainIV,
            ConvFamilySpec::MainV => ConvFamily::MainV,
            ConvFamilySpec::MainVIa => ConvFamily::MainVIa,
            ConvFamilySpec::MainVIb => ConvFamily::MainVIb,
        }
    }

    pub fn claim(&self, profile: &CosetProfile) -> Result<ConvClaim, ConvError> {
        let n = profile.n;
        let c = match *self {
            ConvFamilySpec::MainI { i } => {
                conv_range(i, 2, n / 2 - 2, "mainI: 2 <= i <= n/2 - 2")?;
                ConvClaim { n, k: n - 2 * i + 1, gamma: 2, memory: 1, df_lower: 2 * i + 2, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainII { i } => {
                conv_range(i, 2, n / 2 - 2, "mainII: 2 <= i <= n/2 - 2")?;
                ConvClaim { n, k: n - 2 * i, gamma: 2, memory: 1, df_lower: 2 * i + 3, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainIII { i } => {
                conv_range(i, 2, (n - 1) / 2 - 1, "mainIII: 2 <= i <= (n-1)/2 - 1")?;
                ConvClaim { n, k: n - 2 * i + 1, gamma: 2, memory: 1, df_lower: 2 * i + 2, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainIIIA { i } => {
                conv_range(i, 2, (n - 1) / 2 - 2, "mainIIIA: 2 <= i <= (n-1)/2 - 2")?;
                ConvClaim { n, k: n - 2 * i, gamma: 2, memory: 1, df_lower: 2 * i + 3, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainIIIB { i } => {
                conv_range(i, 2, (n - 1) / 2 - 2, "mainIIIB: 2 <= i <= (n-1)/2 - 2")?;
                ConvClaim { n, k: n - 2 * i + 1, gamma: 2, memory: 1, df_lower: 2 * i + 2, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainIV { i, c1, c2 } => {
                if profile.class != CongruenceClass::RS {
                    return Err(ConvError::FamilyPrecondition(
                        "mainIV needs rn = q - 1 (all cosets singletons)".into(),
                    ));
                }
                if i > n - 2 {
                    return Err(ConvError::IndexRange(format!("mainIV: 0 <= i <= n-2, got {i}")));
                }
                if c1 == 0 || c2 == 0 || c1 + c2 != i + 1 || c1 < c2 {
                    return Err(ConvError::IndexRange(format!(
                        "mainIV: need c1 + c2 = i + 1 with c1 >= c2 >= 1 (i={i}, c1={c1}, c2={c2})"
                    )));
                }
                ConvClaim { n, k: n - c1, gamma: c2, memory: 1, df_lower: i + 2, df_exact: true, mds: true }
            }
            ConvFamilySpec::MainV => {
                ConvClaim { n, k: n - 2, gamma: 2, memory: 1, df_lower: 4, df_exact: true, mds: false }
            }
            ConvFamilySpec::MainVIa => {
                ConvClaim { n, k: n - 3, gamma: 1, memory: 1, df_lower: 4, df_exact: true, mds: false }
            }
            ConvFamilySpec::MainVIb => {
                ConvClaim { n, k: n - 4, gamma: 3, memory: 1, df_lower: 6, df_exact: false, mds: false }
            }
        };
        Ok(c)
    }
}

fn conv_range(i: u64, min: u64, max: u64, what: &str) -> Result<(), ConvError> {
    if i < min || i > max {
        return Err(ConvError::IndexRange(format!("{what} (got i = {i})")));
    }
    Ok(())
}

/// Build and certify a convolutional family instance on the given tower.
pub fn build_conv_family(
    spec: ConvFamilySpec,
    tower: &Arc<ExtensionTower>,
    budget: u64,
) -> Result<ConvCode, ConvError> {
    let profile = CosetProfile::new(tower.q(), tower.r(), tower.n())?;
    let claim = spec.claim(&profile)?;
    let family = spec.family();
    let single_coset_code = |label: u64| -> Result<ConstacyclicCode, ConvError> {
        let z: BTreeSet<u64> = orbit(label, &profile).elements.iter().copied().collect();
        Ok(code_from_defining_set(tower, &z, FamilyTag::Custom)?)
    };
    let union_code = |labels: &[u64]| -> Result<ConstacyclicCode, ConvError> {
        let mut z = BTreeSet::new();
        for &l in labels {
            z.extend(orbit(l, &profile).elements.iter().copied());
        }
        Ok(code_from_defining_set(tower, &z, FamilyTag::Custom)?)
    };
    let md = |x: i128| -> u64 { x.rem_euclid(profile.rn as i128) as u64 };
    let r = profile.r as i128;
    let n = profile.n;

    let code = match spec {
        ConvFamilySpec::MainI { i } => {
            let c2 = build_family(BlockFamily::MainclasI { i }, tower)?;
            let c1 = build_family(BlockFamily::MainclasI { i: i - 1 }, tower)?;
            let s = (n / 2) as i128;
            let c0 = single_coset_code(md(s + r * i as i128))?;
            lift_unit_memory(c2, c1, c0, tower, family, true, budget)?
        }
        ConvFamilySpec::MainII { i } => {
            let c2 = build_family(BlockFamily::MainclasII { i }, tower)?;
            let c1 = build_family(BlockFamily::MainclasII { i: i - 1 }, tower)?;
            let t = ((n + profile.r) / 2) as i128;
            let c0 = single_coset_code(md(t + r * i as i128))?;
            lift_unit_memory(c2, c1, c0, tower, family, true, budget)?
        }
        ConvFamilySpec::MainIII { i } => {
            let c2 = build_family(BlockFamily::MainclasIII { i }, tower)?;
            let c1 = build_family(BlockFamily::MainclasIII { i: i - 1 }, tower)?;
            let c0 = single_coset_code(md(n as i128 + r * i as i128))?;
            lift_unit_memory(c2, c1, c0, tower, family, true, budget)?
        }
        ConvFamilySpec::MainIIIA { i } => {
            let c2 = build_family(BlockFamily::MainclasIIIA { i }, tower)?;
            let c1 = build_family(BlockFamily::MainclasIIIA { i: i - 1 }, tower)?;
            let s = 1 + r * ((profile.cofactor - 1) / 2) as i128;
            let c0 = single_coset_code(md(s - r * i as i128))?;
            lift_unit_memory(c2, c1, c0, tower, family, true, budget)?
        }
        ConvFamilySpec::MainIIIB { i } => {
            let c2 = build_family(BlockFamily::MainclasIIIB { i }, tower)?;
            let c1 = build_family(BlockFamily::MainclasIIIB { i: i - 1 }, tower)?;
            let s = 1 + r * ((profile.cofactor - 1) / 2) as i128;
            let t = md(s + r * (1 + (profile.q / 2) as i128));
            let c0 = single_coset_code(md(t as i128 - r * i as i128))?;
            lift_unit_memory(c2, c1, c0, tower, family, true, budget)?
        }
        ConvFamilySpec::MainIV { i, c1: c1_rows, c2: c2_rows } => {
            let labels: Vec<u64> = (0..=i).map(|l| md(1 + r * l as i128)).collect();
            let full = union_code(&labels)?;
            let head = union_code(&labels[..c1_rows as usize])?;
            let tail = union_code(&labels[c1_rows as usize..])?;
            lift_unit_memory(full, head, tail, tower, family, true, budget)?
        }
        ConvFamilySpec::MainV => {
            let c2 = build_family(BlockFamily::MainclasIV, tower)?;
            let s = (profile.q - 1) / 2;
            let head = single_coset_code(s)?;
            let tail = single_coset_code(s + 1)?;
            lift_unit_memory(c2, head, tail, tower, family, false, budget)?
        }
        ConvFamilySpec::MainVIa => {
            let c2 = build_family(BlockFamily::MainclasIVAa, tower)?;
            let head = union_code(&[2, 3])?;
            let tail = single_coset_code(4)?;
            lift_unit_memory(c2, head, tail, tower, family, false, budget)?
        }
        ConvFamilySpec::MainVIb => {
            let c2 = build_family(BlockFamily::MainclasIVAb, tower)?;
            let head = union_code(&[0, 1, 2])?;
            let tail = union_code(&[3, 4])?;
            lift_unit_memory(c2, head, tail, tower, family, false, budget)?
        }
    };

    // the realized tuple must match the theorem's claim
    if code.n != claim.n || code.k != claim.k || code.gamma != claim.gamma || code.memory != claim.memory {
        return Err(ConvError::FamilyPrecondition(format!(
            "{}: realized ({}, {}, {}; {}) != claimed ({}, {}, {}; {})",
            family.name(),
            code.n,
            code.k,
            code.gamma,
            code.memory,
            claim.n,
            claim.k,
            claim.gamma,
            claim.memory
        )));
    }
    if claim.df_exact {
        if code.df_exact() != Some(claim.df_lower) {
            return Err(ConvError::FamilyPrecondition(format!(
                "{}: free distance squeeze [{}, {}] does not pin the claimed {}",
                family.name(),
                code.df_lower,
                code.df_upper,
                claim.df_lower
            )));
        }
    } else if code.df_lower < claim.df_lower {
        return Err(ConvError::FamilyPrecondition(format!(
            "{}: certified lower bound {} below the claimed {}",
            family.name(),
            code.df_lower,
            claim.df_lower
        )));
    }
    if claim.mds && !code.mds {
        return Err(ConvError::FamilyPrecondition(format!(
            "{}: MDS claim not certified (squeeze [{}, {}], bound {})",
            family.name(),
            code.df_lower,
            code.df_upper,
            code.gsb
        )));
    }
    Ok(code)
}

// ---------------------------------------------------------------------------
// direct free-distance search (smoke scale)
// ---------------------------------------------------------------------------

/// Exact bounded free-distance search for V⊥ given its polynomial parity
/// check G(D) = G_0 + G_1 D: dynamic programming over the syndrome state
/// σ_t = G_1 w_t^T, where each block w_t must satisfy G_0 w_t^T = -σ_{t-1}
/// and a codeword terminates when σ = 0. Paths through an intermediate zero
/// state decompose, so restricting to nonzero intermediate states searches
/// exactly the atomic codewords. Intended for q^(n-κ) within budget.
pub fn free_distance_search(
    code: &ConvCode,
    max_blocks: usize,
    budget: u64,
) -> Result<u64, ConvError> {
    let g0 = code.g.term(0).expect("constant term");
    let ctx = g0.ctx().clone();
    let q = ctx.size();
    let kappa = g0.rows();
    let n = g0.cols();
    let g1 = code.g.term(1).cloned().unwrap_or_else(|| MatrixQ::zeros(ctx.clone(), kappa, n));

    // kernel of G_0 and a solver for G_0 x = s
    let kernel = g0.null_space();
    let kdim = kernel.rows();
    let coset_size = (q as u128).pow(kdim as u32);
    if coset_size.saturating_mul(max_blocks as u128 * (q as u128).pow(code.gamma as u32)) > budget as u128 {
        return Err(ConvError::Budget);
    }
    let (rref_g0, pivots) = g0.rref();

    // encode a syndrome vector as an integer
    let enc_state = |v: &[u32]| -> u64 {
        let mut acc = 0u64;
        for &x in v.iter().rev() {
            acc = acc * q + x as u64;
        }
        acc
    };

    // enumerate the solution coset { w : G_0 w = -sigma } and fold in the
    // tail syndrome G_1 w and the weight of w
    let explore = |sigma: &[u32], mut on_word: Box<dyn FnMut(u64, u64) + '_>| {
        // particular solution via the RREF (the elimination is reapplied to
        // the right-hand side by solving R x = T s with R the reduced rows)
        let neg_s: Vec<u32> = sigma.iter().map(|&x| ctx.neg_enc(x)).collect();
        // solve by Gaussian elimination on the augmented system each call;
        // system sizes here are tiny
        let mut aug = MatrixQ::zeros(ctx.clone(), kappa, n + 1);
        for i in 0..kappa {
            for j in 0..n {
                aug.set(i, j, g0.at(i, j));
            }
            aug.set(i, n, neg_s[i]);
        }
        let (raug, apiv) = aug.rref();
        // inconsistent systems cannot occur: G_0 has full row rank
        debug_assert!(!apiv.contains(&n));
        let mut particular = vec![0u32; n];
        for (pi, &pc) in apiv.iter().enumerate() {
            particular[pc] = raug.at(pi, n);
        }
        let _ = (&rref_g0, &pivots);
        // odometer over the kernel combinations
        let mut digits = vec![0u32; kdim];
        let mut w = particular;
        let delta: Vec<u32> = (0..q as u32).map(|d| ctx.sub_enc((d + 1) % q as u32, d)).collect();
        let weight = |w: &[u32]| w.iter().filter(|&&x| x != 0).count() as u64;
        let tail = |w: &[u32]| enc_state(&g1.mul_vec(w));
        on_word(tail(&w), weight(&w));
        let total: u128 = (q as u128).pow(kdim as u32);
        for _ in 1..total {
            let mut pos = 0usize;
            loop {
                let d = digits[pos];
                let dl = delta[d as usize];
                for (c, &kv) in w.iter_mut().zip(kernel.row(pos)) {
                    if kv != 0 {
                        *c = ctx.add_enc(*c, ctx.mul_enc(dl, kv));
                    }
                }
                digits[pos] = (d + 1) % q as u32;
                if digits[pos] != 0 {
                    break;
                }
                pos += 1;
            }
            on_word(tail(&w), weight(&w));
        }
    };

    let zero_sigma = vec![0u32; kappa];
    let mut best: Option<u64> = None;
    // frontier: atomic paths ending in a nonzero state
    let mut frontier: HashMap<u64, u64> = HashMap::new();
    {
        let best_ref = &mut best;
        let frontier_ref = &mut frontier;
        explore(
            &zero_sigma,
            Box::new(move |state, wt| {
                if wt == 0 {
                    return; // the zero block
                }
                if state == 0 {
                    *best_ref = Some(best_ref.map_or(wt, |b| b.min(wt)));
                } else {
                    frontier_ref
                        .entry(state)
                        .and_modify(|e| *e = (*e).min(wt))
                        .or_insert(wt);
                }
            }),
        );
    }
    for _ in 2..=max_blocks {
        if frontier.is_empty() {
            break;
        }
        let mut next: HashMap<u64, u64> = HashMap::new();
        let mut states: Vec<(u64, u64)> = frontier.iter().map(|(&s, &w)| (s, w)).collect();
        states.sort_unstable();
        for (state, wt0) in states {
            // decode the state back into a syndrome vector
            let mut sigma = vec![0u32; kappa];
            let mut acc = state;
            for s in sigma.iter_mut() {
                *s = (acc % q) as u32;
                acc /= q;
            }
            let best_ref = &mut best;
            let next_ref = &mut next;
            explore(
                &sigma,
                Box::new(move |nstate, wt| {
                    let tot = wt0 + wt;
                    if nstate == 0 {
                        *best_ref = Some(best_ref.map_or(tot, |b| b.min(tot)));
                    } else {
                        next_ref
                            .entry(nstate)
                            .and_modify(|e| *e = (*e).min(tot))
                            .or_insert(tot);
                    }
                }),
            );
        }
        frontier = next;
    }
    best.ok_or_else(|| ConvError::Undecided("no codeword found within the search depth".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtensionTower;

    #[test]
    fn generalized_singleton_examples() {
        assert_eq!(generalized_singleton(10, 7, 2), 6);
        assert_eq!(generalized_singleton(12, 8, 2), 7);
        assert_eq!(generalized_singleton(12, 4, 0), 9); // block Singleton n-k+1
    }

    #[test]
    fn squeeze_examples() {
        assert_eq!(free_distance_squeeze(2, 4, 6, 6), (6, 6));
        assert_eq!(free_distance_squeeze(2, 2, 4, 5), (4, 4));
        assert_eq!(free_distance_squeeze(3, 3, 5, 7), (5, 5));
    }

    #[test]
    fn split_reconstructs_and_validates() {
        let f = crate::field::make_field(3, 1).unwrap();
        let h = MatrixQ::from_enc_rows(
            f.clone(),
            vec![vec![1, 0, 0, 1], vec![0, 1, 0, 2], vec![0, 0, 1, 1]],
        );
        let s = split_parity(&h, &[2, 1]).unwrap();
        assert_eq!(s.kappa, 2);
        let restacked = MatrixQ::vstack(&[&s.pieces[0], &s.pieces[1]]);
        assert_eq!(restacked, h);
        assert_eq!(s.padded[1].rows(), 2);
        assert!(s.padded[1].row(1).iter().all(|&v| v == 0));
        assert!(split_parity(&h, &[1, 2]).is_err(), "first block must be maximal");
        assert!(split_parity(&h, &[2, 2]).is_err(), "counts must sum to rows");
    }

    #[test]
    fn main_i_q9_i2() {
        // (10, 7, 2; 1, 6)_9 MDS
        let t = ExtensionTower::build_for(9, 4, 10).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainI { i: 2 }, &t, 100_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (10, 7, 2, 1));
        assert_eq!(c.df_exact(), Some(6));
        assert!(c.mds);
        assert_eq!((c.c2.n(), c.c2.dim()), (10, 5));
        assert_eq!((c.c1.n(), c.c1.dim()), (10, 7));
        assert_eq!((c.c0.n(), c.c0.dim()), (10, 8));
    }

    #[test]
    fn main_ii_q11_i2() {
        // (12, 8, 2; 1, 7)_11 with k = 5 odd (r = 2)
        let t = ExtensionTower::build_for(11, 2, 12).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainII { i: 2 }, &t, 100_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (12, 8, 2, 1));
        assert_eq!(c.df_exact(), Some(7));
        assert!(c.mds);
    }

    #[test]
    fn main_iv_rs_split() {
        // Reed-Solomon [7, 3, 5]_8 split 2 + 2: (7, 5, 2; 1, 5)_8 MDS
        let t = ExtensionTower::build_for(8, 1, 7).unwrap();
        let c = build_conv_family(
            ConvFamilySpec::MainIV { i: 3, c1: 2, c2: 2 },
            &t,
            100_000_000,
        )
        .unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (7, 5, 2, 1));
        assert_eq!(c.df_exact(), Some(5));
        assert!(c.mds);
        assert_eq!(generalized_singleton(7, 5, 2), 5);
    }

    #[test]
    fn main_v_q7() {
        // (16, 14, 2; 1, 4)_7, defect 1
        let t = ExtensionTower::build_for(7, 1, 16).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainV, &t, 100_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (16, 14, 2, 1));
        assert_eq!(c.df_exact(), Some(4));
        assert!(!c.mds);
        assert_eq!(c.singleton_defect(), Some(1));
    }

    #[test]
    fn main_vi_a_q5() {
        // (8, 5, 1; 1, 4)_5, defect 1
        let t = ExtensionTower::build_for(5, 1, 8).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainVIa, &t, 100_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (8, 5, 1, 1));
        assert_eq!(c.df_exact(), Some(4));
        assert_eq!(c.singleton_defect(), Some(1));
    }

    #[test]
    fn main_vi_b_q7() {
        // (12, 8, 3; 1, >=6)_7
        let t = ExtensionTower::build_for(7, 1, 12).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainVIb, &t, 100_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (12, 8, 3, 1));
        assert!(c.df_lower >= 6);
    }

    #[test]
    fn range_violations() {
        let t = ExtensionTower::build_for(9, 4, 10).unwrap();
        assert!(build_conv_family(ConvFamilySpec::MainI { i: 1 }, &t, 1_000_000).is_err());
        assert!(build_conv_family(ConvFamilySpec::MainI { i: 4 }, &t, 100_000_000).is_err());
        let t8 = ExtensionTower::build_for(8, 1, 7).unwrap();
        assert!(build_conv_family(ConvFamilySpec::MainIV { i: 3, c1: 1, c2: 3 }, &t8, 1_000_000).is_err());
    }

    #[test]
    fn search_confirms_smoke_instances() {
        // mainVIa over GF(5): direct trellis search finds d_f = 4
        let t = ExtensionTower::build_for(5, 1, 8).unwrap();
        let c = build_conv_family(ConvFamilySpec::MainVIa, &t, 100_000_000).unwrap();
        let found = free_distance_search(&c, 4, 100_000_000).unwrap();
        assert_eq!(found, 4);
        assert!(found >= c.df_lower && found <= c.df_upper);
        // mainV over GF(3): (8, 6, 2; 1, 4)_3
        let t3 = ExtensionTower::build_for(3, 1, 8).unwrap();
        let c3 = build_conv_family(ConvFamilySpec::MainV, &t3, 100_000_000).unwrap();
        assert_eq!((c3.n, c3.k, c3.gamma), (8, 6, 2));
        let found3 = free_distance_search(&c3, 4, 100_000_000).unwrap();
        assert_eq!(found3, c3.df_exact().unwrap());
    }

    #[test]
    fn memory_zero_reduces_to_block_distance() {
        // degenerate lift of the [4, 2, 3]_3 negacyclic code
        use crate::blockcodes::{code_from_defining_set, FamilyTag};
        let t = ExtensionTower::build_for(3, 2, 4).unwrap();
        let z: std::collections::BTreeSet<u64> = [1u64, 3].into_iter().collect();
        let code = code_from_defining_set(&t, &z, FamilyTag::Custom).unwrap();
        let c = lift_block_degenerate(code, &t, 1_000_000).unwrap();
        assert_eq!((c.n, c.k, c.gamma, c.memory), (4, 2, 0, 0));
        assert_eq!(c.df_exact(), Some(3));
        let found = free_distance_search(&c, 3, 10_000_000).unwrap();
        assert_eq!(found, 3);
    }
}
