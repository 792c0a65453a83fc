//! Repetition certificates: exact witness families showing that a sequence
//! has infinitely many prefixes of the form `U V^alpha` with
//! `|U V^alpha| / |U V|` bounded away from 1.

use serde::{Deserialize, Serialize};

use crate::dfao::Dfao;
use crate::error::{Error, Result};
use crate::morphic::MorphicSpec;
use crate::pda::{Dpao, PairBudget, PairMethod};
use crate::source::SequenceSource;
use crate::words::{verify_repetition, Ratio, RepetitionWitness};

/// How the certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    DfaoPigeonhole,
    MorphicWitness,
    PdaPair,
    SequencePair,
}

impl CertificateKind {
    pub fn is_pair(&self) -> bool {
        !matches!(self, CertificateKind::MorphicWitness)
    }
}

/// The morphic seed `U b V`, written over the internal alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub u: String,
    pub b: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Identifier of the source the witnesses were checked against.
    pub machine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<PairMethod>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedRecord>,
    #[serde(with = "ratio_text")]
    pub dio_lower_bound: Ratio,
    /// Smallest ratio among the stored witnesses.
    #[serde(with = "ratio_text")]
    pub attained_bound: Ratio,
    #[serde(with = "ratio_text")]
    pub ratio_growth_bound: Ratio,
    pub verified_depth: u32,
    pub witnesses: Vec<RepetitionWitness>,
}

mod ratio_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::words::{parse_ratio, Ratio};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `k^exp` with overflow reported as an error.
fn power(k: u32, exp: u32) -> Result<u64> {
    (k as u64)
        .checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{k}^{exp}")))
}

/// Witness for level `ell` of the pair `(n, n')`: the blocks of integers
/// `k^ell n .. k^ell (n+1)` and `k^ell n' .. k^ell (n'+1)` coincide.
fn pair_witness(n: u64, n_prime: u64, scale: u64, first_index: u64) -> Result<RepetitionWitness> {
    let overflow = || Error::Overflow("pair witness length".into());
    let start = scale.checked_mul(n).ok_or_else(overflow)?;
    let u = start
        .checked_sub(first_index)
        .ok_or_else(|| Error::InvalidArgument("the pair starts before the first index".into()))?;
    let v = scale.checked_mul(n_prime - n).ok_or_else(overflow)?;
    RepetitionWitness::new(u, v, v.checked_add(scale).ok_or_else(overflow)?)
}

/// Checks `a_{k^l n + i} = a_{k^l n' + i}` for `0 <= i < k^l`, `l = 0..=depth`,
/// and packages the implied witnesses.
pub fn certificate_from_pair(
    source: &dyn SequenceSource,
    n: u64,
    n_prime: u64,
    k: u32,
    depth: u32,
) -> Result<Certificate> {
    if k < 2 {
        return Err(Error::InvalidBase(k as u64));
    }
    if n == 0 || n >= n_prime {
        return Err(Error::InvalidArgument(format!(
            "a pair needs 0 < n < n' (got {n}, {n_prime})"
        )));
    }
    let first = source.first_index();
    if n < first {
        return Err(Error::InvalidArgument(format!(
            "n = {n} precedes the first index {first}"
        )));
    }
    let top = power(k, depth)?;
    let needed = top
        .checked_mul(n_prime + 1)
        .ok_or_else(|| Error::Overflow("prefix length".into()))?
        - first;
    let needed = usize::try_from(needed).map_err(|_| Error::Overflow("prefix length".into()))?;
    let prefix = source.prefix(needed)?;
    let data = prefix.symbols();
    check_pair_levels(data, n, n_prime, k, depth, first)?;

    let witnesses = (0..=depth)
        .map(|level| pair_witness(n, n_prime, power(k, level)?, first))
        .collect::<Result<Vec<_>>>()?;
    for w in &witnesses {
        if !verify_repetition(data, w)? {
            return Err(Error::InvalidCertificate(format!("witness {w} fails on the prefix")));
        }
    }
    let attained = witnesses.iter().map(|w| w.ratio()).min().expect("depth + 1 witnesses");
    Ok(Certificate {
        kind: CertificateKind::SequencePair,
        machine: source.id(),
        n: Some(n),
        n_prime: Some(n_prime),
        k: Some(k),
        method: None,
        seed: None,
        dio_lower_bound: Ratio::new(n_prime, n_prime - 1),
        attained_bound: attained,
        ratio_growth_bound: Ratio::from_integer(k as u64),
        verified_depth: depth,
        witnesses,
    })
}

fn check_pair_levels(data: &[u32], n: u64, n_prime: u64, k: u32, depth: u32, first: u64) -> Result<()> {
    for level in 0..=depth {
        let scale = power(k, level)?;
        for offset in 0..scale {
            let left = scale * n + offset;
            let right = scale * n_prime + offset;
            let at = |m: u64| data[(m - first) as usize];
            if at(left) != at(right) {
                return Err(Error::Refutation {
                    level,
                    offset,
                    left,
                    right,
                });
            }
        }
    }
    Ok(())
}

/// First repeated state among `n = 1, 2, ...` gives the pair.
pub fn certify_dfao(m: &Dfao, depth: u32) -> Result<Certificate> {
    let mut first_seen = vec![None; m.num_states()];
    for n in 1u64.. {
        let q = m.state_of(n) as usize;
        if let Some(earlier) = first_seen[q] {
            let mut cert = certificate_from_pair(m, earlier, n, m.k(), depth)?;
            cert.kind = CertificateKind::DfaoPigeonhole;
            return Ok(cert);
        }
        first_seen[q] = Some(n);
    }
    unreachable!("pigeonhole on finitely many states")
}

/// Equivalent pair search followed by the pair checks. `Ok(None)` means the
/// budget ran out, which says nothing about the machine.
pub fn certify_pda(m: &Dpao, budget: PairBudget, depth: u32) -> Result<Option<Certificate>> {
    let Some(pair) = m.find_equivalent_pair(budget) else {
        return Ok(None);
    };
    let mut cert = certificate_from_pair(m, pair.n, pair.n_prime, m.k(), depth)?;
    cert.kind = CertificateKind::PdaPair;
    cert.method = Some(pair.method);
    Ok(Some(cert))
}

/// Length of `sigma^n(w)` for `n = 0..=depth`, from letter counts.
fn iterated_lengths(spec: &MorphicSpec, word: &[u32], depth: u32) -> Result<Vec<u64>> {
    let m = spec.incidence();
    let mut counts = vec![0u64; spec.internal().len()];
    for &a in word {
        counts[a as usize] += 1;
    }
    let mut out = Vec::with_capacity(depth as usize + 1);
    for level in 0..=depth {
        out.push(counts.iter().sum());
        if level < depth {
            counts = m.apply(&counts)?;
        }
    }
    Ok(out)
}

/// Witnesses `(|sigma^n(U)|, |sigma^n(bV)|, |sigma^n(bV)| + |sigma^n(b)|)`
/// for `n = 0..=depth`, each checked on the internal fixed point.
pub fn certify_morphic(spec: &MorphicSpec, depth: u32) -> Result<Certificate> {
    const SCAN: usize = 4096;
    let seed = spec.witness_seed(SCAN)?;
    let mut bv = vec![seed.b];
    bv.extend_from_slice(&seed.v);
    let us = iterated_lengths(spec, &seed.u, depth)?;
    let bvs = iterated_lengths(spec, &bv, depth)?;
    let bs = iterated_lengths(spec, &[seed.b], depth)?;
    let witnesses = (0..=depth as usize)
        .map(|i| {
            let ext = bvs[i]
                .checked_add(bs[i])
                .ok_or_else(|| Error::Overflow("witness length".into()))?;
            RepetitionWitness::new(us[i], bvs[i], ext)
        })
        .collect::<Result<Vec<_>>>()?;
    let needed = witnesses.iter().map(|w| w.end()).max().expect("non-empty");
    let needed = usize::try_from(needed).map_err(|_| Error::Overflow("prefix length".into()))?;
    let internal = spec.fixed_point(needed);
    for w in &witnesses {
        if !verify_repetition(&internal, w)? {
            return Err(Error::InvalidCertificate(format!(
                "morphic witness {w} fails on the fixed point"
            )));
        }
    }
    let dio = witnesses.iter().map(|w| w.ratio()).min().expect("non-empty");
    let growth = witnesses
        .windows(2)
        .map(|pair| Ratio::new(pair[1].u + pair[1].v, pair[0].u + pair[0].v))
        .max()
        .unwrap_or(Ratio::from_integer(1));
    let names = spec.internal();
    Ok(Certificate {
        kind: CertificateKind::MorphicWitness,
        machine: spec.id(),
        n: None,
        n_prime: None,
        k: None,
        method: None,
        seed: Some(SeedRecord {
            u: names.render(&seed.u),
            b: names.name(seed.b).to_string(),
            v: names.render(&seed.v),
        }),
        dio_lower_bound: dio,
        attained_bound: dio,
        ratio_growth_bound: growth,
        verified_depth: depth,
        witnesses,
    })
}

/// Rational approximation implied by one witness: `p / q` with
/// `q = b^u (b^v - 1)` agrees with the expansion on `u + ext` digits, so
/// `|xi - p/q| < q^(-rho)` with `rho` the witness ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximationClaim {
    pub base: usize,
    pub u: u64,
    pub v: u64,
    pub exponent: String,
}

impl std::fmt::Display for ApproximationClaim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "q = {b}^{u} ({b}^{v} - 1), |xi - p/q| < q^-({e})",
            b = self.base,
            u = self.u,
            v = self.v,
            e = self.exponent
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub witnesses_checked: usize,
    pub checked_depth: u32,
    pub approximations: Vec<ApproximationClaim>,
}

/// Re-checks a certificate against `source`; pair identities are extended
/// by `extra_depth` levels.
pub fn verify_certificate(source: &dyn SequenceSource, cert: &Certificate, extra_depth: u32) -> Result<VerificationReport> {
    let invalid = |msg: String| Err(Error::InvalidCertificate(msg));
    if cert.machine != source.id() {
        return invalid(format!(
            "certificate is bound to {} but the source is {}",
            cert.machine,
            source.id()
        ));
    }
    if cert.dio_lower_bound <= Ratio::from_integer(1) {
        return invalid("the lower bound must exceed 1".into());
    }
    if cert.witnesses.is_empty() {
        return invalid("no witnesses".into());
    }
    let attained = cert.witnesses.iter().map(|w| w.ratio()).min().expect("non-empty");
    if attained != cert.attained_bound {
        return invalid(format!("attained bound is {attained}, not {}", cert.attained_bound));
    }

    let mut checked_depth = cert.verified_depth;
    if cert.kind.is_pair() {
        let (Some(n), Some(n_prime), Some(k)) = (cert.n, cert.n_prime, cert.k) else {
            return invalid("pair certificate without n, nPrime and k".into());
        };
        if n == 0 || n >= n_prime || k < 2 {
            return invalid(format!("malformed pair ({n}, {n_prime}) in base {k}"));
        }
        if cert.dio_lower_bound != Ratio::new(n_prime, n_prime - 1) {
            return invalid("lower bound does not match the pair".into());
        }
        if cert.ratio_growth_bound != Ratio::from_integer(k as u64) {
            return invalid("growth bound does not match the base".into());
        }
        checked_depth = cert.verified_depth + extra_depth;
        let fresh = certificate_from_pair(source, n, n_prime, k, checked_depth).map_err(|e| match e {
            Error::Refutation { .. } => Error::InvalidCertificate(e.to_string()),
            other => other,
        })?;
        for w in &cert.witnesses {
            if !fresh.witnesses.contains(w) {
                return invalid(format!("witness {w} is not part of the pair family"));
            }
        }
    } else {
        if cert.dio_lower_bound != attained {
            return invalid("lower bound does not match the witnesses".into());
        }
        let growth = cert
            .witnesses
            .windows(2)
            .map(|p| Ratio::new(p[1].u + p[1].v, p[0].u + p[0].v))
            .max()
            .unwrap_or(Ratio::from_integer(1));
        if growth > cert.ratio_growth_bound {
            return invalid(format!("consecutive growth {growth} exceeds the stated bound"));
        }
    }

    let needed = cert.witnesses.iter().map(|w| w.end()).max().expect("non-empty");
    let needed = usize::try_from(needed).map_err(|_| Error::Overflow("prefix length".into()))?;
    let prefix = source.prefix(needed)?;
    for w in &cert.witnesses {
        if !verify_repetition(prefix.symbols(), w)? {
            return invalid(format!("witness {w} fails on the source"));
        }
    }
    let base = source.alphabet().len().max(2);
    Ok(VerificationReport {
        witnesses_checked: cert.witnesses.len(),
        checked_depth,
        approximations: cert
            .witnesses
            .iter()
            .map(|w| ApproximationClaim {
                base,
                u: w.u,
                v: w.v,
                exponent: w.ratio().to_string(),
            })
            .collect(),
    })
}
