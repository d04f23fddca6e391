use std::sync::Arc;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use cycnorm_core::cyclotomic::{
    classify, purity, run_suites, ClassifyOptions, CyclotomicScheme, NormalityVerdict, Outcome, Suite,
    EXTRA_SUITE_RINGS, ODD_GALOIS_SWEEP, PRODUCT_SUITE_RINGS,
};
use cycnorm_core::perm::{enumerate_unit_subgroups, SubgroupSpec, UnitSubgroup};
use cycnorm_core::ring::{enumerate_ideals, ring_automorphisms, FiniteRing, RingSpec, RingStructure, DEFAULT_IDEAL_LIMIT};
use cycnorm_core::scheme::{automorphism_group, AutSearchOptions};
use cycnorm_core::Execution;

use crate::args::{Cli, Command, Filter, Format, InputError, Instance, Selection};
use crate::output::{cell, Sink};

const ELEMENT_LISTING_CAP: usize = 1_000_000;

const VERDICT_COLUMNS: &[(&str, &str)] = &[
    ("ring", "ring"),
    ("K", "K"),
    ("rank", "rank"),
    ("pure", "pure"),
    ("strongly_pure", "strongly_pure"),
    ("theorem", "theorem_verdict"),
    ("bruteforce", "bruteforce_verdict"),
    ("aut_order", "aut_order"),
    ("agammal_order", "agammal_order"),
    ("consistent", "consistent"),
];

struct Ring {
    spec: RingSpec,
    ring: Arc<FiniteRing>,
    structure: Arc<RingStructure>,
}

fn load(text: &str) -> Result<Ring> {
    let spec: RingSpec = text.parse().with_context(|| format!("ring spec '{text}'"))?;
    let ring = Arc::new(spec.build().with_context(|| format!("building {spec}"))?);
    let structure = Arc::new(RingStructure::new(&ring)?);
    Ok(Ring { spec, ring, structure })
}

fn resolve_subgroup(r: &Ring, text: &str) -> Result<UnitSubgroup> {
    let spec: SubgroupSpec = text.parse().with_context(|| format!("subgroup spec '{text}'"))?;
    spec
        .resolve(&r.ring, &r.structure)
        .with_context(|| format!("subgroup '{text}' of {}", r.spec))
}

fn is_pure(r: &Ring, k: &UnitSubgroup) -> Result<bool> {
    Ok(r.structure.is_local && purity(&r.ring, &r.structure, k)?.is_pure)
}

/// Explicit subgroup, or every subgroup passing the filter.
fn subgroups(r: &Ring, k: Option<&str>, filter: Filter, cap: usize) -> Result<Vec<UnitSubgroup>> {
    let mut list = match k {
        Some(text) => vec![resolve_subgroup(r, text)?],
        None => enumerate_unit_subgroups(&r.ring, &r.structure, cap)?,
    };
    if filter == Filter::PureOnly {
        let mut kept = Vec::new();
        for k in list {
            if is_pure(r, &k)? {
                kept.push(k);
            }
        }
        list = kept;
    }
    Ok(list)
}

fn selected_rings(sel: &Selection, default: &[&[&str]]) -> Result<Vec<Ring>> {
    let names: Vec<String> = if !sel.ring.is_empty() {
        sel.ring.clone()
    } else if sel.sweep {
        default.iter().flat_map(|l| l.iter().map(|s| s.to_string())).collect()
    } else {
        return Err(InputError("give --ring or --sweep".into()).into());
    };
    let mut rings = names.iter().map(|n| load(n)).collect::<Result<Vec<_>>>()?;
    rings.sort_by(|a, b| a.spec.cmp(&b.spec));
    rings.dedup_by(|a, b| a.spec == b.spec);
    Ok(rings)
}

fn labels(ring: &FiniteRing, elems: &[usize]) -> String {
    let parts: Vec<&str> = elems.iter().map(|&x| ring.label(x)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<bool> {
    if cli.max_aut == 0 || cli.subgroup_cap == 0 {
        return Err(InputError("caps must be positive".into()).into());
    }
    let exec = Execution::with_jobs(cli.jobs)?;
    let options = ClassifyOptions {
        aut: AutSearchOptions {
            degree_cap: cli.max_aut,
            ..AutSearchOptions::default()
        },
        max_aut: cli.max_aut,
        subgroup_cap: cli.subgroup_cap,
        exec,
    };
    let mut sink = Sink::new(cli.format, !cli.no_timestamp, out);
    match &cli.command {
        Command::Ring { ring } => cmd_ring(&mut sink, &load(ring)?, &options),
        Command::Subgroups { ring, filter } => cmd_subgroups(&mut sink, &load(ring)?, *filter, &options),
        Command::Scheme(instance) => cmd_scheme(&mut sink, instance),
        Command::Aut { instance, elements } => cmd_aut(&mut sink, instance, *elements, &options),
        Command::Classify(sel) => cmd_classify(&mut sink, sel, &options),
        Command::Verify { suite, selection } => cmd_verify(&mut sink, suite, selection, &options),
    }
}

fn cmd_ring(sink: &mut Sink, r: &Ring, options: &ClassifyOptions) -> Result<bool> {
    let (ring, s) = (&r.ring, &r.structure);
    let factors: Vec<String> = match ring.crt_decompose() {
        Ok(f) if f.len() > 1 => f.iter().map(|x| x.ring.spec().to_string()).collect(),
        _ => vec![r.spec.to_string()],
    };
    let subgroup_count = enumerate_unit_subgroups(ring, s, options.subgroup_cap).ok().map(|v| v.len());
    let record = json!({
        "ring": r.spec.to_string(),
        "size": ring.size(),
        "characteristic": s.characteristic,
        "local": s.is_local,
        "field": s.is_field(),
        "residue_field_size": s.residue_field_size,
        "factors": factors,
        "units": s.units,
        "radical": s.radical,
        "socle": s.socle,
        "teichmuller": s.teichmuller,
        "principal_units": s.principal_units,
        "ideals": enumerate_ideals(ring, DEFAULT_IDEAL_LIMIT)?.len(),
        "automorphisms": ring_automorphisms(ring)?.order(),
        "unit_subgroups": subgroup_count,
        "labels": ring.labels(),
    });
    match sink.format {
        Format::Json => sink.json_lines(&[record])?,
        Format::Csv => {
            let keys: Vec<(&str, &str)> = record
                .as_object()
                .unwrap()
                .keys()
                .map(|k| (k.as_str(), k.as_str()))
                .collect();
            sink.records(std::slice::from_ref(&record), &keys)?;
        }
        Format::Text => {
            sink.text_header()?;
            let sets = ["units", "radical", "socle", "teichmuller", "principal_units"];
            for (key, value) in record.as_object().unwrap() {
                let shown = match (sets.contains(&key.as_str()), value) {
                    (true, Value::Array(items)) => {
                        let elems: Vec<usize> = items.iter().map(|v| v.as_u64().unwrap() as usize).collect();
                        format!("{} ({})", labels(ring, &elems), elems.len())
                    }
                    _ if key == "labels" => continue,
                    _ => cell(value),
                };
                sink.line(&format!("{key}: {shown}"))?;
            }
        }
    }
    Ok(true)
}

fn cmd_subgroups(sink: &mut Sink, r: &Ring, filter: Filter, options: &ClassifyOptions) -> Result<bool> {
    let mut records = Vec::new();
    for k in subgroups(r, None, filter, options.subgroup_cap)? {
        let report = r
            .structure
            .is_local
            .then(|| purity(&r.ring, &r.structure, &k))
            .transpose()?;
        let c = CyclotomicScheme::new(r.ring.clone(), r.structure.clone(), k.clone())?;
        records.push(json!({
            "ring": r.spec.to_string(),
            "K": k.elements(),
            "elements": labels(&r.ring, k.elements()),
            "order": k.order(),
            "rank": c.rank(),
            "pure": report.as_ref().map(|p| p.is_pure),
            "strongly_pure": report.as_ref().map(|p| p.is_strongly_pure),
        }));
    }
    let columns: &[(&str, &str)] = &[
        ("ring", "ring"),
        ("K", "K"),
        ("order", "order"),
        ("rank", "rank"),
        ("pure", "pure"),
        ("strongly_pure", "strongly_pure"),
    ];
    if sink.format == Format::Text {
        let mut text_columns = columns.to_vec();
        text_columns[1] = ("K", "elements");
        sink.records(&records, &text_columns[1..])?;
    } else {
        sink.records(&records, columns)?;
    }
    Ok(true)
}

fn cmd_scheme(sink: &mut Sink, instance: &Instance) -> Result<bool> {
    let r = load(&instance.ring)?;
    let k = resolve_subgroup(&r, &instance.k)?;
    let c = CyclotomicScheme::new(r.ring.clone(), r.structure.clone(), k)?;
    let scheme = c.scheme();
    let n = scheme.degree();
    match sink.format {
        Format::Text => {
            sink.text_header()?;
            let dump = scheme.dump();
            sink.line(dump.trim_end())?;
        }
        Format::Json => {
            let rows: Vec<Vec<u32>> = (0..n).map(|x| (0..n).map(|y| scheme.color(x, y)).collect()).collect();
            sink.json_lines(&[json!({
                "ring": r.spec.to_string(),
                "K": c.subgroup().elements(),
                "degree": n,
                "rank": scheme.rank(),
                "orbits": c.orbits(),
                "colors": rows,
            })])?;
        }
        Format::Csv => {
            let records: Vec<Value> = (0..n * n)
                .map(|i| json!({"x": i / n, "y": i % n, "color": scheme.color(i / n, i % n)}))
                .collect();
            sink.records(&records, &[("x", "x"), ("y", "y"), ("color", "color")])?;
        }
    }
    Ok(true)
}

fn cmd_aut(sink: &mut Sink, instance: &Instance, elements: bool, options: &ClassifyOptions) -> Result<bool> {
    let r = load(&instance.ring)?;
    let k = resolve_subgroup(&r, &instance.k)?;
    let c = CyclotomicScheme::new(r.ring.clone(), r.structure.clone(), k)?;
    let aut = automorphism_group(c.scheme(), &options.aut)?;
    if !aut.verify(c.scheme()) {
        anyhow::bail!("automorphism re-verification failed");
    }
    let listing = if elements {
        Some(aut.to_perm_group(ELEMENT_LISTING_CAP)?)
    } else {
        None
    };
    let generators: Vec<Vec<usize>> = aut.generators().iter().map(|g| g.images()).collect();
    let all: Option<Vec<Vec<usize>>> = listing
        .as_ref()
        .map(|g| g.elements().iter().map(|p| p.images()).collect());
    match sink.format {
        Format::Json => sink.json_lines(&[json!({
            "ring": r.spec.to_string(),
            "K": c.subgroup().elements(),
            "order": aut.order().to_string(),
            "base": aut.base(),
            "orbit_sizes": aut.orbit_sizes(),
            "generators": generators,
            "elements": all,
        })])?,
        Format::Csv => {
            let mut records = Vec::new();
            for (kind, list) in [("generator", Some(&generators)), ("element", all.as_ref())] {
                for (i, images) in list.into_iter().flatten().enumerate() {
                    records.push(json!({"kind": kind, "index": i, "images": images}));
                }
            }
            sink.records(&records, &[("kind", "kind"), ("index", "index"), ("images", "images")])?;
        }
        Format::Text => {
            sink.text_header()?;
            sink.line(&format!("ring: {}", r.spec))?;
            sink.line(&format!("K: {}", labels(&r.ring, c.subgroup().elements())))?;
            sink.line(&format!("order: {}", aut.order()))?;
            sink.line(&format!("base: {:?}", aut.base()))?;
            sink.line(&format!("generators: {}", aut.generators().len()))?;
            for g in aut.generators() {
                sink.line(&format!("  {g}"))?;
            }
            if let Some(group) = &listing {
                sink.line(&format!("elements: {}", group.order()))?;
                for g in group.elements() {
                    sink.line(&format!("  {g}"))?;
                }
            }
        }
    }
    Ok(true)
}

fn cmd_classify(sink: &mut Sink, sel: &Selection, options: &ClassifyOptions) -> Result<bool> {
    let rings = selected_rings(sel, &[ODD_GALOIS_SWEEP])?;
    let mut items = Vec::new();
    for r in &rings {
        for k in subgroups(r, sel.k.as_deref(), sel.filter, options.subgroup_cap)? {
            items.push((r, k));
        }
    }
    let mut verdicts: Vec<(RingSpec, NormalityVerdict)> = options
        .exec
        .map_slice(&items, |(r, k)| {
            classify(&r.ring, &r.structure, k, options).map(|v| (r.spec.clone(), v))
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
    verdicts.sort_by(|(a, va), (b, vb)| (a, &va.k).cmp(&(b, &vb.k)));
    let consistent = verdicts.iter().all(|(_, v)| v.consistent);
    let records: Vec<Value> = verdicts
        .iter()
        .map(|(_, v)| serde_json::to_value(v))
        .collect::<Result<_, _>>()?;
    sink.records(&records, VERDICT_COLUMNS)?;
    Ok(consistent)
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>> {
    let mut suites = Vec::new();
    for name in names {
        let add: Vec<Suite> = if name.eq_ignore_ascii_case("all") {
            Suite::ALL.to_vec()
        } else {
            vec![name.parse::<Suite>()?]
        };
        for s in add {
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
    }
    Ok(suites)
}

fn cmd_verify(sink: &mut Sink, names: &[String], sel: &Selection, options: &ClassifyOptions) -> Result<bool> {
    let suites = parse_suites(names)?;
    let rings = selected_rings(sel, &[ODD_GALOIS_SWEEP, EXTRA_SUITE_RINGS, PRODUCT_SUITE_RINGS])?;
    let mut records = Vec::new();
    let mut summary = Vec::new();
    for r in &rings {
        let list = subgroups(r, sel.k.as_deref(), sel.filter, options.subgroup_cap)?;
        for (suite, report) in suites.iter().zip(run_suites(&suites, &r.spec, Some(list), options)?) {
            let mut counts = [0usize; 3];
            for result in &report.results {
                let (outcome, detail, slot) = match &result.outcome {
                    Outcome::Pass => ("pass", None, 0),
                    Outcome::NotApplicable(why) => ("not_applicable", Some(why.as_str()), 1),
                    Outcome::Fail(why) => ("fail", Some(why.as_str()), 2),
                };
                counts[slot] += 1;
                records.push(json!({
                    "suite": suite.name(),
                    "alias": suite.alias(),
                    "ring": report.ring,
                    "K": result.subgroup,
                    "outcome": outcome,
                    "detail": detail,
                }));
            }
            summary.push((suite, report.ring.clone(), counts));
        }
    }
    let ok = summary.iter().all(|(_, _, c)| c[2] == 0);
    match sink.format {
        Format::Text => {
            sink.text_header()?;
            let header: Vec<String> = ["status", "suite", "alias", "ring", "pass", "n/a", "fail"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = summary
                .iter()
                .map(|(suite, ring, c)| {
                    let status = if c[2] > 0 { "FAIL" } else { "ok" };
                    vec![
                        status.to_string(),
                        suite.name().to_string(),
                        suite.alias().to_string(),
                        ring.clone(),
                        c[0].to_string(),
                        c[1].to_string(),
                        c[2].to_string(),
                    ]
                })
                .collect();
            sink.table(&header, &rows)?;
            for r in records.iter().filter(|r| r["outcome"] == "fail") {
                sink.line(&format!("FAIL {} {} K={}: {}", cell(&r["suite"]), cell(&r["ring"]), r["K"], cell(&r["detail"])))?;
            }
        }
        _ => sink.records(
            &records,
            &[
                ("suite", "suite"),
                ("alias", "alias"),
                ("ring", "ring"),
                ("K", "K"),
                ("outcome", "outcome"),
                ("detail", "detail"),
            ],
        )?,
    }
    Ok(ok)
}
