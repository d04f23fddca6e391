//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cycnorm_core::cyclotomic::{
    fk_witness, impurity_witness, invariant_closure_aut_check, is_normal_bruteforce, is_pure_exhaustive,
    multiplication_sring, purity, run_suites, stabilizer_product_check, sweep, BruteForceVerdict, ClassifyOptions,
    CyclotomicScheme, Outcome, Suite, TheoremVerdict, EXTRA_SUITE_RINGS, ODD_GALOIS_SWEEP, PRODUCT_SUITE_RINGS,
};
use cycnorm_core::perm::{
    affine_semilinear_group, enumerate_unit_subgroups, Perm, PermGroup, UnitSubgroup, DEFAULT_SUBGROUP_CAP,
};
use cycnorm_core::ring::{ring_automorphisms, FiniteRing, Ideal, RingSpec, RingStructure};
use cycnorm_core::scheme::{
    automorphism_group, wl_closure, wl_refine, AutSearchOptions, CoherentConfiguration,
};
use cycnorm_core::sring::{AbelianGroup, SRing};
use cycnorm_core::Execution;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn specs(names: &[&str]) -> Vec<RingSpec> {
    names.iter().map(|s| s.parse().unwrap()).collect()
}

fn setup(spec: &str) -> (Arc<FiniteRing>, Arc<RingStructure>) {
    let ring = Arc::new(spec.parse::<RingSpec>().unwrap().build().unwrap());
    let s = Arc::new(RingStructure::new(&ring).unwrap());
    (ring, s)
}

/// Every `(R, K)` of the odd Galois sweep.
fn sweep_instances() -> Vec<CyclotomicScheme> {
    let mut out = Vec::new();
    for name in ODD_GALOIS_SWEEP {
        let (ring, s) = setup(name);
        for k in enumerate_unit_subgroups(&ring, &s, DEFAULT_SUBGROUP_CAP).unwrap() {
            out.push(CyclotomicScheme::new(ring.clone(), s.clone(), k).unwrap());
        }
    }
    out
}

fn criterion_1() -> Check {
    let verdicts = sweep(&specs(ODD_GALOIS_SWEEP), &ClassifyOptions::default()).map_err(|e| e.to_string())?;
    let mut mismatches = Vec::new();
    for v in &verdicts {
        let agree = matches!(
            (v.theorem_verdict, v.bruteforce_verdict),
            (TheoremVerdict::Normal, BruteForceVerdict::Normal)
                | (TheoremVerdict::NotNormal, BruteForceVerdict::NotNormal)
        );
        if !agree || !v.consistent {
            mismatches.push(format!("{} K={:?}", v.ring, v.k));
        }
    }
    ensure(mismatches.is_empty(), || format!("mismatches: {mismatches:?}"))?;
    let not_normal = verdicts.iter().filter(|v| v.theorem_verdict == TheoremVerdict::NotNormal).count();
    Ok(format!(
        "{} instances over {} rings, {} not normal, 0 mismatches",
        verdicts.len(),
        ODD_GALOIS_SWEEP.len(),
        not_normal
    ))
}

fn criterion_2() -> Check {
    let mut count = 0;
    for name in ODD_GALOIS_SWEEP {
        let (ring, s) = setup(name);
        for k in enumerate_unit_subgroups(&ring, &s, DEFAULT_SUBGROUP_CAP).unwrap() {
            let report = purity(&ring, &s, &k).map_err(|e| e.to_string())?;
            ensure(report.is_pure == report.is_strongly_pure, || {
                format!("{name} K={:?}: pure {} strongly pure {}", k.elements(), report.is_pure, report.is_strongly_pure)
            })?;
            let minimal = impurity_witness(&ring, &s, &k).unwrap().is_none();
            let exhaustive = is_pure_exhaustive(&ring, &k).unwrap();
            ensure(minimal == exhaustive && minimal == report.is_pure, || {
                format!("{name} K={:?}: minimal-ideal {minimal}, exhaustive {exhaustive}", k.elements())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} instances, pure = strongly pure and both purity oracles agree"))
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/named_instances.json")
}

fn criterion_3() -> Check {
    let opts = AutSearchOptions::default();
    let mut records = Vec::new();
    let mut named = |spec: &str, k: &[&str], normal: bool, aut: u32, agammal: u32| -> Result<CyclotomicScheme, String> {
        let (ring, s) = setup(spec);
        let elems: Vec<usize> = k.iter().map(|t| ring.parse_element(t).unwrap()).collect();
        let subgroup = UnitSubgroup::new(&ring, elems).map_err(|e| e.to_string())?;
        let c = CyclotomicScheme::new(ring, s, subgroup).map_err(|e| e.to_string())?;
        let b = is_normal_bruteforce(&c, &opts).map_err(|e| e.to_string())?;
        ensure(
            b.normal == normal && b.aut_order == BigUint::from(aut) && b.agammal_order == BigUint::from(agammal),
            || format!("{spec} K={k:?}: normal {} |Aut| {} |AΓL| {}", b.normal, b.aut_order, b.agammal_order),
        )?;
        ensure(b.aut.verify(c.scheme()), || format!("{spec}: automorphisms fail re-verification"))?;
        records.push(json!({
            "ring": spec,
            "K": c.subgroup().elements(),
            "normal": b.normal,
            "aut_order": b.aut_order.to_string(),
            "agammal_order": b.agammal_order.to_string(),
            "witness": b.witness.as_ref().map(|w| w.images()),
        }));
        Ok(c)
    };
    named("Z/9", &["1", "8"], true, 18, 54)?;
    let c = named("Z/9", &["1", "4", "7"], false, 81, 54)?;
    named("GF(5)", &["1", "2", "3", "4"], false, 120, 20)?;
    named("GF(3)", &["[1]", "[2]"], true, 6, 6)?;

    // f_4 lies in Aut(C) but outside the explicitly enumerated AΓL₁(Z/9)
    let ring = c.ring();
    let f4 = fk_witness(&c, &Ideal::principal(ring, 3), 4).map_err(|e| e.to_string())?;
    let agammal = affine_semilinear_group(ring, c.structure(), &ring_automorphisms(ring).unwrap()).unwrap();
    ensure(
        c.scheme().is_automorphism(&f4.perm) && !agammal.contains(&f4.perm) && !f4.in_agammal,
        || "f_4 is not a witness".into(),
    )?;
    ensure(f4.perm.cycles() == vec![vec![1, 4, 7]], || format!("f_4 = {:?}", f4.perm.cycles()))?;

    let current = serde_json::to_string_pretty(&records).unwrap() + "\n";
    let path = golden_path();
    match fs::read_to_string(&path) {
        Ok(stored) => {
            ensure(stored == current, || format!("oracle output differs from {}", path.display()))?;
            Ok("4 named instances match the expected values and the golden file".into())
        }
        Err(_) => {
            fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
            fs::write(&path, current).map_err(|e| e.to_string())?;
            Ok(format!("4 named instances match the expected values; golden file written to {}", path.display()))
        }
    }
}

fn criterion_4() -> Check {
    let opts = AutSearchOptions::default();
    let mut summary = Vec::new();
    for name in PRODUCT_SUITE_RINGS {
        let (ring, s) = setup(name);
        let subgroups = enumerate_unit_subgroups(&ring, &s, DEFAULT_SUBGROUP_CAP).unwrap();
        ensure(subgroups.len() >= 5, || format!("{name}: only {} subgroups", subgroups.len()))?;
        ensure(
            subgroups.iter().any(|k| k.order() == 1) && subgroups.iter().any(|k| k.order() == s.units.len()),
            || format!("{name}: trivial or full subgroup missing"),
        )?;
        for k in &subgroups {
            let check = stabilizer_product_check(&ring, k, &opts).map_err(|e| e.to_string())?;
            ensure(check.holds(), || format!("{name} K={:?}: {check:?}", k.elements()))?;
        }
        summary.push(format!("{name}: {}", subgroups.len()));
    }
    Ok(format!("stabilizer product formula holds ({})", summary.join(", ")))
}

fn criterion_5() -> Check {
    let ring = FiniteRing::truncated_poly(2, 4).map_err(|e| e.to_string())?;
    let s = RingStructure::new(&ring).unwrap();
    let x2 = ring.parse_element("[0,0,1,0]").unwrap();
    let k = UnitSubgroup::new(&ring, [ring.one(), ring.add(ring.one(), x2)]).map_err(|e| e.to_string())?;
    let report = purity(&ring, &s, &k).map_err(|e| e.to_string())?;
    ensure(report.is_pure && !report.is_strongly_pure, || format!("{report:?}"))?;
    Ok("POLY(2,4), K = {1, 1+x^2}: pure, not strongly pure".into())
}

/// `G × Y`: fibers `{g} × Y` carry a rank-2 scheme and each pair of fibers
/// its own relation; `G = Z_m` acts by rotating the fibers.
fn g_times_y(m: usize, y: usize) -> (CoherentConfiguration, PermGroup) {
    let n = m * y;
    let colors: Vec<u32> = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            let (ga, gb) = (a / y, b / y);
            if ga == gb {
                (2 * ga + usize::from(a != b)) as u32
            } else {
                (2 * m + ga * m + gb) as u32
            }
        })
        .collect();
    let c = CoherentConfiguration::from_colors(n, &colors).unwrap();
    let rot = Perm::from_images((0..n).map(|v| ((v / y + 1) % m) * y + v % y).collect()).unwrap();
    (c, PermGroup::generate(n, &[rot], 1000).unwrap())
}

fn criterion_6() -> Check {
    let names: Vec<&str> = ODD_GALOIS_SWEEP
        .iter()
        .chain(EXTRA_SUITE_RINGS)
        .chain(PRODUCT_SUITE_RINGS)
        .copied()
        .collect();
    let options = ClassifyOptions::default();
    let mut passes = vec![0usize; Suite::ALL.len()];
    let mut failures = Vec::new();
    for name in &names {
        let reports = run_suites(Suite::ALL, &name.parse().unwrap(), None, &options).map_err(|e| e.to_string())?;
        for (i, report) in reports.iter().enumerate() {
            passes[i] += report.pass_count();
            for f in report.failures() {
                if let Outcome::Fail(msg) = &f.outcome {
                    failures.push(format!("{} on {name} K={:?}: {msg}", report.suite, f.subgroup));
                }
            }
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    let idle: Vec<&str> = Suite::ALL
        .iter()
        .zip(&passes)
        .filter(|(_, &p)| p == 0)
        .map(|(s, _)| s.name())
        .collect();
    ensure(idle.is_empty(), || format!("suites never applicable: {idle:?}"))?;

    let opts = AutSearchOptions::default();
    for (m, y) in [(2, 2), (3, 3), (4, 2)] {
        let (c, gamma) = g_times_y(m, y);
        let ok = invariant_closure_aut_check(&c, &gamma, &opts).map_err(|e| e.to_string())?;
        ensure(ok == Some(true), || format!("G×Y with |G| = {m}, |Y| = {y}: {ok:?}"))?;
    }
    let (c, gamma) = g_times_y(3, 3);
    let closed = cycnorm_core::scheme::invariant_closure(&c, gamma.elements()).unwrap();
    let order = automorphism_group(&closed, &opts).unwrap().order();
    ensure(order == BigUint::from(648u32), || format!("|Aut(C^Γ)| = {order} for G×Y, expected 648"))?;

    let total: usize = passes.iter().sum();
    Ok(format!(
        "{} suites on {} rings: {total} passing checks, 0 failures; G×Y family verified",
        Suite::ALL.len(),
        names.len()
    ))
}

/// Order of the automorphism group by running over all of `Sym(n)`.
fn aut_order_exhaustive(c: &CoherentConfiguration) -> usize {
    let n = c.degree();
    let sym = PermGroup::symmetric(n, 100_000).unwrap();
    sym.elements().iter().filter(|g| c.is_automorphism(g)).count()
}

fn random_symmetric_relation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<bool> {
    let mut rel = vec![false; n * n];
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                rel[a * n + b] = true;
                rel[b * n + a] = true;
            }
        }
    }
    rel
}

fn check_engine(c: &CoherentConfiguration, exec: Execution) -> Result<(), String> {
    c.verify().map_err(|v| format!("axioms: {v:?}"))?;
    let again = wl_refine(c.degree(), c.colors(), exec);
    ensure(again.colors() == c.colors(), || "WL closure is not idempotent".into())?;
    Ok(())
}

fn criterion_7() -> Check {
    let exec = Execution::default();
    let opts = AutSearchOptions::default();
    let instances = sweep_instances();
    for c in &instances {
        let label = || format!("{} K={:?}", c.ring().spec(), c.subgroup().elements());
        check_engine(c.scheme(), exec).map_err(|e| format!("{}: {e}", label()))?;
        let a = multiplication_sring(c, exec).map_err(|e| format!("{}: {e}", label()))?;
        let back = SRing::from_cayley(&a.to_cayley(), a.group().clone()).map_err(|e| e.to_string())?;
        ensure(back.basic_sets() == a.basic_sets(), || format!("{}: S-ring round trip", label()))?;
        let aut = automorphism_group(c.scheme(), &opts).map_err(|e| e.to_string())?;
        ensure(aut.verify(c.scheme()), || format!("{}: automorphism re-verification", label()))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0c_4e11);
    for round in 0..100 {
        if round % 2 == 0 {
            // random graphs, automorphisms checked against all of Sym(n)
            let n = rng.gen_range(3..=7);
            let density = rng.gen_range(0.2..0.8);
            let rel = random_symmetric_relation(&mut rng, n, density);
            let c = wl_closure(n, &[rel], exec);
            check_engine(&c, exec).map_err(|e| format!("round {round}: {e}"))?;
            let aut = automorphism_group(&c, &opts).map_err(|e| e.to_string())?;
            ensure(aut.verify(&c), || format!("round {round}: automorphism re-verification"))?;
            let expected = aut_order_exhaustive(&c);
            ensure(aut.order() == BigUint::from(expected), || {
                format!("round {round}: |Aut| {} vs exhaustive {expected}", aut.order())
            })?;
        } else {
            // random Cayley graphs over Z/n through the S-ring round trip
            let n: u64 = rng.gen_range(4..=16);
            let ring = FiniteRing::zmod(n).unwrap();
            let group = Arc::new(AbelianGroup::additive(&ring));
            let mut connection: Vec<usize> = (1..n as usize).collect();
            connection.shuffle(&mut rng);
            connection.truncate(rng.gen_range(1..n as usize));
            let nn = n as usize;
            let mut rel = vec![false; nn * nn];
            for x in 0..nn {
                for &s in &connection {
                    let y = ring.add(x, s);
                    rel[x * nn + y] = true;
                    rel[y * nn + x] = true;
                }
            }
            let c = wl_closure(nn, &[rel], exec);
            check_engine(&c, exec).map_err(|e| format!("round {round}: {e}"))?;
            let a = SRing::from_cayley(&c, group).map_err(|e| format!("round {round}: {e}"))?;
            ensure(a.to_cayley().colors() == c.colors(), || format!("round {round}: Cayley round trip"))?;
            a.verify_schur_multipliers().map_err(|e| format!("round {round}: {e}"))?;
            let aut = automorphism_group(&c, &opts).map_err(|e| e.to_string())?;
            ensure(aut.verify(&c), || format!("round {round}: automorphism re-verification"))?;
        }
    }
    Ok(format!("{} sweep instances and 100 seeded random inputs", instances.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("odd Galois classification sweep", criterion_1),
        ("purity equivalences", criterion_2),
        ("named instances", criterion_3),
        ("product stabilizer formula", criterion_4),
        ("strong-purity counterexample", criterion_5),
        ("property suites", criterion_6),
        ("engine self-consistency", criterion_7),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {} ({title}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({title}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
