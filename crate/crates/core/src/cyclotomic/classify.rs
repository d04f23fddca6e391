//! Normality verdicts: the closed-form classification for odd Galois rings
//! next to the brute-force automorphism oracle.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{is_normal_bruteforce, purity, CyclotomicScheme};
use crate::exec::Execution;
use crate::perm::{enumerate_unit_subgroups, semilinear_decomposition, UnitSubgroup, DEFAULT_SUBGROUP_CAP};
use crate::ring::{Elem, FiniteRing, RingSpec, RingStructure};
use crate::scheme::{AutSearchOptions, DEFAULT_AUT_DEGREE_CAP};
use crate::{Error, Result};

/// The odd Galois rings of order at most 81.
pub const ODD_GALOIS_SWEEP: &[&str] = &[
    "GF(3)", "GF(9)", "GF(27)", "GF(81)", "Z/9", "Z/27", "GR(3^2,2)", "GF(5)", "GF(25)", "Z/25", "GF(7)",
    "GF(49)", "Z/49",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremVerdict {
    Normal,
    NotNormal,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BruteForceVerdict {
    Normal,
    NotNormal,
    Skipped,
}

impl TheoremVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremVerdict::Normal => "normal",
            TheoremVerdict::NotNormal => "not_normal",
            TheoremVerdict::NotApplicable => "not_applicable",
        }
    }
}

impl BruteForceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            BruteForceVerdict::Normal => "normal",
            BruteForceVerdict::NotNormal => "not_normal",
            BruteForceVerdict::Skipped => "skipped",
        }
    }
}

/// Classification of `Cyc(K, GR(p^d, r))` for odd `p`:
/// for `d = 1` normal iff `(p, r) = (3, 1)` or `K ≠ R^×`; for `d > 1`
/// normal iff `K` does not contain `1 + p^{d−1}R`. Anything else is not
/// applicable.
pub fn classify_normality_theorem(ring: &FiniteRing, structure: &RingStructure, k: &UnitSubgroup) -> TheoremVerdict {
    let Some((p, d, r)) = ring.spec().galois_parameters() else {
        return TheoremVerdict::NotApplicable;
    };
    if p == 2 {
        return TheoremVerdict::NotApplicable;
    }
    let normal = if d == 1 {
        (p, r) == (3, 1) || k.order() != structure.units.len()
    } else {
        let scale = p.pow(d - 1) as i64;
        !ring
            .elements()
            .all(|x| k.contains(ring.add(ring.one(), ring.scalar(scale, x))))
    };
    if normal {
        TheoremVerdict::Normal
    } else {
        TheoremVerdict::NotNormal
    }
}

/// One classified instance. Fields are declared in key order so that the
/// serialized object has sorted keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityVerdict {
    #[serde(rename = "K")]
    pub k: Vec<Elem>,
    /// Decimal, to survive JSON readers without big integers.
    pub agammal_order: Option<String>,
    pub aut_order: Option<String>,
    pub bruteforce_verdict: BruteForceVerdict,
    pub consistent: bool,
    pub pure: Option<bool>,
    pub rank: usize,
    pub ring: String,
    pub strongly_pure: Option<bool>,
    pub theorem_verdict: TheoremVerdict,
    pub witness: Option<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub aut: AutSearchOptions,
    /// Largest ring for which the brute-force oracle runs.
    pub max_aut: usize,
    pub subgroup_cap: usize,
    pub exec: Execution,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            aut: AutSearchOptions::default(),
            max_aut: DEFAULT_AUT_DEGREE_CAP,
            subgroup_cap: DEFAULT_SUBGROUP_CAP,
            exec: Execution::default(),
        }
    }
}

/// Run the classifier and (within caps) the oracle on one instance.
pub fn classify(
    ring: &Arc<FiniteRing>,
    structure: &Arc<RingStructure>,
    k: &UnitSubgroup,
    options: &ClassifyOptions,
) -> Result<NormalityVerdict> {
    let c = CyclotomicScheme::new(ring.clone(), structure.clone(), k.clone())?;
    let (pure, strongly_pure) = if structure.is_local {
        let report = purity(ring, structure, k)?;
        (Some(report.is_pure), Some(report.is_strongly_pure))
    } else {
        (None, None)
    };
    let theorem = classify_normality_theorem(ring, structure, k);

    let mut verdict = NormalityVerdict {
        k: k.elements().to_vec(),
        agammal_order: None,
        aut_order: None,
        bruteforce_verdict: BruteForceVerdict::Skipped,
        consistent: true,
        pure,
        rank: c.rank(),
        ring: ring.spec().to_string(),
        strongly_pure,
        theorem_verdict: theorem,
        witness: None,
    };
    if ring.size() > options.max_aut {
        return Ok(verdict);
    }
    let mut aut_options = options.aut.clone();
    aut_options.degree_cap = aut_options.degree_cap.max(options.max_aut);
    let brute = match is_normal_bruteforce(&c, &aut_options) {
        Ok(b) => b,
        Err(Error::CapExceeded { .. }) => return Ok(verdict),
        Err(e) => return Err(e),
    };
    verdict.bruteforce_verdict = if brute.normal {
        BruteForceVerdict::Normal
    } else {
        BruteForceVerdict::NotNormal
    };
    verdict.aut_order = Some(brute.aut_order.to_string());
    verdict.agammal_order = Some(brute.agammal_order.to_string());

    let witness_ok = match &brute.witness {
        Some(w) => c.scheme().is_automorphism(w) && semilinear_decomposition(ring, structure, w).is_none(),
        None => brute.normal,
    };
    verdict.witness = brute.witness.map(|w| w.images());
    let agree = match theorem {
        TheoremVerdict::NotApplicable => true,
        TheoremVerdict::Normal => brute.normal,
        TheoremVerdict::NotNormal => !brute.normal,
    };
    verdict.consistent = agree && witness_ok && brute.stabilizer_in_ring_aut == brute.normal;
    Ok(verdict)
}

/// Classify every subgroup of the unit group of every ring, in parallel
/// across instances; output sorted by (ring, K).
pub fn sweep(specs: &[RingSpec], options: &ClassifyOptions) -> Result<Vec<NormalityVerdict>> {
    let mut items = Vec::new();
    for spec in specs {
        let ring = Arc::new(spec.build()?);
        let structure = Arc::new(RingStructure::new(&ring)?);
        for k in enumerate_unit_subgroups(&ring, &structure, options.subgroup_cap)? {
            items.push((spec.clone(), ring.clone(), structure.clone(), k));
        }
    }
    let mut results = options
        .exec
        .map_slice(&items, |(spec, ring, structure, k)| {
            classify(ring, structure, k, options).map(|v| (spec.clone(), v))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|(a, va), (b, vb)| (a, &va.k).cmp(&(b, &vb.k)));
    Ok(results.into_iter().map(|(_, v)| v).collect())
}
