//! q-ary cyclotomic cosets modulo rn, restricted to O_rn = {1 + ri}, and the
//! closed-form partitions predicted for the supported congruence classes.
//!
//! Everything here is pure integer arithmetic: a [`CosetProfile`] fixes
//! (q, r, n) with gcd(n, q) = 1 and r | q - 1, classifies the profile, and
//! the partition of O_rn can be computed two ways: by brute-force orbit
//! enumeration ([`partition_orn`]) or by instantiating the closed-form
//! description for the profile's class ([`predict_partition`]). The two must
//! agree; tests and the acceptance suite cross-check them.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::field::{gcd, prime_power};

#[derive(Debug, Error)]
pub enum CosetError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("no closed-form partition for class {0:?}")]
    UnsupportedClass(CongruenceClass),
    #[error("residue {0} is outside O_rn")]
    NotInOrn(u64),
    #[error("predicted partition fails validation: {0}")]
    BadPrediction(String),
}

/// Which closed-form coset description applies to a profile.
///
/// * `L1`: q odd, n = q+1, cofactor even — two unit cosets {s}, {(r+1)s}
///   around s = n/2, the rest pairs {s-ri, s+ri}.
/// * `L2`: q odd, n = q+1, cofactor odd — all pairs {t+ri, t-ri-r} around
///   t = (n+r)/2.
/// * `L3`: q ≡ 1 (mod 4), n = (q+1)/2, cofactor even — unit coset {n},
///   pairs {n-ri, n+ri}.
/// * `L4`: q ≡ 3 (mod 4), n = (q+1)/2, cofactor even — unit cosets {n} and
///   {(r+2)n/2}, pairs {n-ri, n+ri}.
/// * `L5`: q = 2^t (t ≥ 2), n = q+1 — unit coset at t = s + r(1+q/2), the
///   coset {s, s+r} at s = 1 + r(cofactor-1)/2, pairs {s-ri, s+r+ri}.
/// * `RS`: rn = q-1 — every coset is a singleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CongruenceClass {
    L1,
    L2,
    L3,
    L4,
    L5,
    RS,
    Other,
}

/// The arithmetic setting (q, r, n): q a prime power, r | q - 1 the order of
/// the constacyclic unit, n the code length, cofactor = (q - 1)/r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetProfile {
    pub q: u64,
    pub r: u64,
    pub n: u64,
    pub cofactor: u64,
    pub rn: u64,
    pub class: CongruenceClass,
}

impl CosetProfile {
    pub fn new(q: u64, r: u64, n: u64) -> Result<CosetProfile, CosetError> {
        if prime_power(q).is_none() {
            return Err(CosetError::InvalidProfile(format!("q = {q} is not a prime power")));
        }
        if n == 0 {
            return Err(CosetError::InvalidProfile("n must be positive".into()));
        }
        if gcd(n, q) != 1 {
            return Err(CosetError::InvalidProfile(format!(
                "gcd(n, q) = {} != 1 (n = {n}, q = {q})",
                gcd(n, q)
            )));
        }
        if r == 0 || (q - 1) % r != 0 {
            return Err(CosetError::InvalidProfile(format!("r = {r} does not divide q - 1 = {}", q - 1)));
        }
        let cofactor = (q - 1) / r;
        let rn = r * n;
        let class = classify(q, r, n, cofactor, rn);
        Ok(CosetProfile { q, r, n, cofactor, rn, class })
    }

    /// The set O_rn = {1 + ri : 0 <= i <= n-1}, as residues mod rn.
    pub fn orn(&self) -> Vec<u64> {
        (0..self.n).map(|i| (1 + self.r * i) % self.rn).collect()
    }

    pub fn contains(&self, z: u64) -> bool {
        z < self.rn && (z + self.rn - 1) % self.r == 0
    }

    /// Index i of a residue z = 1 + ri in O_rn.
    pub fn index_of(&self, z: u64) -> Result<u64, CosetError> {
        if !self.contains(z) {
            return Err(CosetError::NotInOrn(z));
        }
        Ok(((z + self.rn - 1) % self.rn) / self.r)
    }
}

fn classify(q: u64, r: u64, n: u64, cofactor: u64, rn: u64) -> CongruenceClass {
    let odd = q % 2 == 1;
    if odd && r >= 2 && n == q + 1 {
        return if cofactor % 2 == 0 { CongruenceClass::L1 } else { CongruenceClass::L2 };
    }
    if odd && r >= 2 && 2 * n == q + 1 && cofactor % 2 == 0 {
        return if q % 4 == 1 { CongruenceClass::L3 } else { CongruenceClass::L4 };
    }
    if !odd && q >= 4 && n == q + 1 {
        return CongruenceClass::L5;
    }
    if rn == q - 1 {
        return CongruenceClass::RS;
    }
    CongruenceClass::Other
}

/// One q-ary cyclotomic coset mod rn: the orbit of its representative under
/// multiplication by q, sorted, with the least element as representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CyclotomicCoset {
    pub representative: u64,
    pub elements: Vec<u64>,
}

impl CyclotomicCoset {
    fn from_elements(mut elements: Vec<u64>) -> CyclotomicCoset {
        elements.sort_unstable();
        elements.dedup();
        CyclotomicCoset { representative: elements[0], elements }
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A partition of O_rn into cosets, sorted by representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    pub profile: CosetProfile,
    pub cosets: Vec<CyclotomicCoset>,
}

impl CosetPartition {
    fn validated(profile: CosetProfile, mut cosets: Vec<CyclotomicCoset>) -> Result<Self, CosetError> {
        cosets.sort_by_key(|c| c.representative);
        let mut seen = BTreeSet::new();
        for c in &cosets {
            for &z in &c.elements {
                if !profile.contains(z) {
                    return Err(CosetError::BadPrediction(format!("{z} outside O_rn")));
                }
                if !seen.insert(z) {
                    return Err(CosetError::BadPrediction(format!("{z} covered twice")));
                }
            }
        }
        if seen.len() as u64 != profile.n {
            return Err(CosetError::BadPrediction(format!(
                "covers {} of {} elements",
                seen.len(),
                profile.n
            )));
        }
        Ok(CosetPartition { profile, cosets })
    }
}

/// The multiplicative q-orbit of s modulo rn.
pub fn orbit(s: u64, profile: &CosetProfile) -> CyclotomicCoset {
    let rn = profile.rn;
    let q = profile.q % rn;
    let s = s % rn;
    let mut elements = vec![s];
    let mut cur = s * q % rn;
    while cur != s {
        elements.push(cur);
        cur = cur * q % rn;
    }
    CyclotomicCoset::from_elements(elements)
}

/// Brute-force partition of O_rn into q-orbits.
pub fn partition_orn(profile: &CosetProfile) -> CosetPartition {
    let mut seen = BTreeSet::new();
    let mut cosets = Vec::new();
    for z in profile.orn() {
        if seen.contains(&z) {
            continue;
        }
        let c = orbit(z, profile);
        for &e in &c.elements {
            seen.insert(e);
        }
        cosets.push(c);
    }
    CosetPartition::validated(*profile, cosets).expect("orbit partition is always valid")
}

/// Closed-form partition for the profile's congruence class. Must equal
/// [`partition_orn`]; errors on class `Other`.
pub fn predict_partition(profile: &CosetProfile) -> Result<CosetPartition, CosetError> {
    let rn = profile.rn;
    let r = profile.r;
    let n = profile.n;
    let md = |x: i128| -> u64 { (x.rem_euclid(rn as i128)) as u64 };
    let mut cosets: Vec<CyclotomicCoset> = Vec::new();
    match profile.class {
        CongruenceClass::L1 => {
            let s = (n / 2) as i128;
            let ri = r as i128;
            cosets.push(CyclotomicCoset::from_elements(vec![md(s)]));
            cosets.push(CyclotomicCoset::from_elements(vec![md((ri + 1) * s)]));
            for i in 1..=(n / 2 - 1) as i128 {
                cosets.push(CyclotomicCoset::from_elements(vec![md(s - ri * i), md(s + ri * i)]));
            }
        }
        CongruenceClass::L2 => {
            let t = ((n + r) / 2) as i128;
            let ri = r as i128;
            for i in 0..(n / 2) as i128 {
                cosets.push(CyclotomicCoset::from_elements(vec![md(t + ri * i), md(t - ri * i - ri)]));
            }
        }
        CongruenceClass::L3 => {
            let ni = n as i128;
            let ri = r as i128;
            cosets.push(CyclotomicCoset::from_elements(vec![md(ni)]));
            for i in 1..=((n - 1) / 2) as i128 {
                cosets.push(CyclotomicCoset::from_elements(vec![md(ni - ri * i), md(ni + ri * i)]));
            }
        }
        CongruenceClass::L4 => {
            let ni = n as i128;
            let ri = r as i128;
            cosets.push(CyclotomicCoset::from_elements(vec![md(ni)]));
            cosets.push(CyclotomicCoset::from_elements(vec![md((ri + 2) * ni / 2)]));
            for i in 1..=(n / 2 - 1) as i128 {
                cosets.push(CyclotomicCoset::from_elements(vec![md(ni - ri * i), md(ni + ri * i)]));
            }
        }
        CongruenceClass::L5 => {
            let q = profile.q;
            let i0 = ((profile.cofactor - 1) / 2) as i128;
            let ri = r as i128;
            let s = 1 + ri * i0;
            let t = md(s + ri * (1 + (q / 2) as i128));
            cosets.push(CyclotomicCoset::from_elements(vec![t]));
            cosets.push(CyclotomicCoset::from_elements(vec![md(s), md(s + ri)]));
            for i in 1..=(q / 2 - 1) as i128 {
                cosets.push(CyclotomicCoset::from_elements(vec![md(s - ri * i), md(s + ri + ri * i)]));
            }
        }
        CongruenceClass::RS => {
            for i in 0..n {
                cosets.push(CyclotomicCoset::from_elements(vec![(1 + r * i) % rn]));
            }
        }
        CongruenceClass::Other => return Err(CosetError::UnsupportedClass(profile.class)),
    }
    CosetPartition::validated(*profile, cosets)
}

/// Longest arithmetic run b, b+r, ..., b+r(L-1) inside Z, scanning
/// cyclically mod rn. Returns (b, L); ties break to the smallest start
/// residue. The BCH designed distance of a code with defining set Z is L+1.
pub fn longest_run(z: &BTreeSet<u64>, profile: &CosetProfile) -> (u64, u64) {
    if z.is_empty() {
        return (0, 0);
    }
    let n = profile.n;
    // map to indices on the length-n cycle
    let mut idx: Vec<u64> = z
        .iter()
        .map(|&e| profile.index_of(e).expect("defining set inside O_rn"))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    let k = idx.len() as u64;
    if k == n {
        return ((1) % profile.rn, n);
    }
    // runs end at the predecessors of gaps; scan each maximal run once
    let mut best_len = 0u64;
    let mut best_start = u64::MAX;
    let set: BTreeSet<u64> = idx.iter().copied().collect();
    for &i in &idx {
        let prev = (i + n - 1) % n;
        if set.contains(&prev) {
            continue; // not the start of a run
        }
        let mut len = 1u64;
        let mut cur = i;
        loop {
            let nxt = (cur + 1) % n;
            if set.contains(&nxt) {
                len += 1;
                cur = nxt;
            } else {
                break;
            }
        }
        let b = (1 + profile.r * i) % profile.rn;
        if len > best_len || (len == best_len && b < best_start) {
            best_len = len;
            best_start = b;
        }
    }
    (best_start, best_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn profile(q: u64, r: u64, n: u64) -> CosetProfile {
        CosetProfile::new(q, r, n).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let p = profile(9, 4, 10);
        assert_eq!(orbit(5, &p).elements, vec![5]);
        assert_eq!(orbit(13, &p).elements, vec![13, 37]);
        assert_eq!(orbit(0, &p).elements, vec![0]);
    }

    #[test]
    fn partition_q9_r4() {
        let p = profile(9, 4, 10);
        assert_eq!(p.class, CongruenceClass::L1);
        let part = partition_orn(&p);
        let sets: Vec<Vec<u64>> = part.cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(
            sets,
            vec![vec![1, 9], vec![5], vec![13, 37], vec![17, 33], vec![21, 29], vec![25]]
        );
    }

    #[test]
    fn partition_q3_r2() {
        let p = profile(3, 2, 4);
        assert_eq!(p.class, CongruenceClass::L2);
        let part = partition_orn(&p);
        let sets: Vec<Vec<u64>> = part.cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![5, 7]]);
    }

    #[test]
    fn partition_q8_r1_is_singletons() {
        let p = profile(8, 1, 7);
        assert_eq!(p.class, CongruenceClass::RS);
        let part = partition_orn(&p);
        assert_eq!(part.cosets.len(), 7);
        assert!(part.cosets.iter().all(|c| c.len() == 1));
        // O_7 with r = 1 is all of Z_7, including 0
        assert_eq!(part.cosets[0].elements, vec![0]);
    }

    #[test]
    fn predict_l1_example() {
        let p = profile(9, 4, 10);
        let predicted = predict_partition(&p).unwrap();
        assert_eq!(predicted, partition_orn(&p));
        // exactly two unit cosets, everything else size 2, sizes sum to n
        let ones = predicted.cosets.iter().filter(|c| c.len() == 1).count();
        let twos = predicted.cosets.iter().filter(|c| c.len() == 2).count();
        assert_eq!(ones, 2);
        assert_eq!(ones + 2 * twos, p.n as usize);
    }

    #[test]
    fn predict_l2_example() {
        let p = profile(3, 2, 4);
        let predicted = predict_partition(&p).unwrap();
        let sets: Vec<Vec<u64>> = predicted.cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![5, 7]]);
    }

    #[test]
    fn predict_l5_example() {
        // q = 16, r = 3, n = 17: s = 7, t = 34
        let p = profile(16, 3, 17);
        assert_eq!(p.class, CongruenceClass::L5);
        let predicted = predict_partition(&p).unwrap();
        assert!(predicted.cosets.iter().any(|c| c.elements == vec![7, 10]));
        assert!(predicted.cosets.iter().any(|c| c.elements == vec![34]));
        assert_eq!(predicted, partition_orn(&p));
    }

    #[test]
    fn predict_matches_bruteforce_up_to_q49() {
        let qs: Vec<u64> = (2..=49).filter(|&q| prime_power(q).is_some()).collect();
        let mut checked = 0;
        for &q in &qs {
            for r in crate::field::divisors(q - 1) {
                // length choices that can carry a lemma tag
                for n in [q + 1, (q + 1) / 2, (q - 1) / r.max(1)] {
                    if n == 0 || gcd(n, q) != 1 || (q - 1) % r != 0 {
                        continue;
                    }
                    let Ok(p) = CosetProfile::new(q, r, n) else { continue };
                    if p.class == CongruenceClass::Other {
                        continue;
                    }
                    let predicted = predict_partition(&p).unwrap();
                    assert_eq!(predicted, partition_orn(&p), "q={q} r={r} n={n} {:?}", p.class);
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "swept {checked} tagged profiles");
    }

    #[test]
    fn longest_run_examples() {
        let p = profile(9, 4, 10);
        let z: BTreeSet<u64> = [1, 5, 9].into_iter().collect();
        assert_eq!(longest_run(&z, &p), (1, 3));
        let z: BTreeSet<u64> = [5].into_iter().collect();
        assert_eq!(longest_run(&z, &p), (5, 1));
        let p2 = profile(19, 2, 9);
        let z: BTreeSet<u64> = [3, 15, 5, 13, 9, 7, 11].into_iter().collect();
        assert_eq!(longest_run(&z, &p2), (3, 7));
    }

    #[test]
    fn longest_run_wraps_cyclically() {
        // q = 13, r = 6, n = 7: the run of the third table-one family wraps
        // the rn = 42 boundary: 37, 1, 7, 13, 19
        let p = profile(13, 6, 7);
        let z: BTreeSet<u64> = [37, 1, 7, 13, 19].into_iter().collect();
        assert_eq!(longest_run(&z, &p), (37, 5));
    }

    #[test]
    fn longest_run_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = profile(9, 4, 10);
        for _ in 0..500 {
            let z: BTreeSet<u64> = p
                .orn()
                .into_iter()
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            if z.is_empty() || z.len() == p.n as usize {
                continue;
            }
            let (_, len) = longest_run(&z, &p);
            let shift = rng.gen_range(1..p.n);
            let rotated: BTreeSet<u64> = z.iter().map(|&e| (e + p.r * shift) % p.rn).collect();
            let (_, len2) = longest_run(&rotated, &p);
            assert_eq!(len, len2);
        }
    }

    #[test]
    fn orbit_multiplication_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (q, r, n) in [(9, 4, 10), (17, 2, 9), (16, 3, 17), (7, 3, 4)] {
            let p = profile(q, r, n);
            for _ in 0..100 {
                let s = rng.gen_range(0..p.rn);
                let c = orbit(s, &p);
                let mapped: BTreeSet<u64> = c.elements.iter().map(|&e| e * q % p.rn).collect();
                let orig: BTreeSet<u64> = c.elements.iter().copied().collect();
                assert_eq!(mapped, orig);
            }
        }
    }

    #[test]
    fn invalid_profiles_rejected() {
        assert!(CosetProfile::new(4, 3, 4).is_err()); // gcd(n, q) = 4
        assert!(CosetProfile::new(9, 5, 10).is_err()); // 5 does not divide 8
        assert!(CosetProfile::new(6, 1, 5).is_err()); // q not a prime power
    }

    #[test]
    fn l4_profile_prediction() {
        // q = 7, r = 3, n = 4: partition {4}, {10}, {1, 7}
        let p = profile(7, 3, 4);
        assert_eq!(p.class, CongruenceClass::L4);
        let predicted = predict_partition(&p).unwrap();
        let sets: Vec<Vec<u64>> = predicted.cosets.iter().map(|c| c.elements.clone()).collect();
        assert_eq!(sets, vec![vec![1, 7], vec![4], vec![10]]);
    }
}
