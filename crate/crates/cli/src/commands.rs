use std::fmt::Write as _;
use std::fs;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sextic_k3::brauer::cubic::{congruence_scan, split_scan};
use sextic_k3::brauer::{bm_verdict, AlgebraDatum, Certificate, CubicAlgebraDatum, QuaternionAlgebraDatum, Verdict, VerdictConfig};
use sextic_k3::exact::rational::Rational;
use sextic_k3::intersection::GramMatrix;
use sextic_k3::localfields::cover::IntSurface;
use sextic_k3::localfields::symbols::{hilbert2, hilbert_support, InvariantValue, Place};
use sextic_k3::report;
use sextic_k3::search::{check_quat_conditions, prove_prime, search_cubic_primes, search_points, search_quat};
use sextic_k3::{Error, Result};

use crate::cache::Cache;
use crate::{Cli, CohomologyArgs, Command, GramArgs, PointsArgs, SearchArgs, SelftestArgs, VerifyArgs};

pub const EXIT_VERIFIED: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;

struct Output {
    code: u8,
    json: Value,
    text: String,
}

pub fn run(cli: &Cli) -> Result<u8> {
    let cache = Cache::open(cli.cache_dir.as_deref())?;
    let out = match &cli.command {
        Command::Gram(a) => gram(&cache, a)?,
        Command::Saturation => saturation(&cache)?,
        Command::Cohomology(a) => cohomology(&cache, a)?,
        Command::Verify(a) => verify(&config(cli), a)?,
        Command::Search(a) => search(&config(cli), a)?,
        Command::Points(a) => points(a)?,
        Command::Selftest(a) => selftest(cli.seed, a),
    };
    let rendered = serde_json::to_string_pretty(&out.json)?;
    if let Some(path) = &cli.output {
        fs::write(path, format!("{}\n", rendered))?;
    }
    if cli.json {
        println!("{}", rendered);
    } else {
        print!("{}", out.text);
    }
    Ok(out.code)
}

fn config(cli: &Cli) -> VerdictConfig {
    let mut cfg = VerdictConfig::default();
    cfg.cover.max_depth = cli.precision_cap;
    cfg
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Degenerate(format!("not an integer: {}", s)))
}

fn status_of(v: Verdict) -> (&'static str, u8) {
    match v {
        Verdict::Obstruction => ("obstruction", EXIT_VERIFIED),
        Verdict::Undecided => ("undecided", EXIT_UNDECIDED),
        Verdict::NotLocallySoluble => ("not_locally_soluble", EXIT_PRECONDITION),
        Verdict::None => ("none", EXIT_REFUTED),
    }
}

fn gram(cache: &Cache, a: &GramArgs) -> Result<Output> {
    let g: GramMatrix = match &a.import {
        Some(path) => GramMatrix::from_json(&fs::read_to_string(path)?)?,
        None if a.alternate => cache.get_or_compute("gram_alternate", report::alternate_gram)?,
        None => cache.get_or_compute("gram", report::reference_gram)?,
    };
    let r = report::lattice_report(&g)?;
    let roundtrip = match &a.export {
        Some(path) => {
            fs::write(path, g.to_json()?)?;
            let back = GramMatrix::from_json(&fs::read_to_string(path)?)?;
            Some(back == g)
        }
        None => None,
    };
    let mut text = String::new();
    writeln!(text, "basis: {}", r.labels.join(" ")).unwrap();
    writeln!(text, "symmetric: {}, diagonal -2: {}", r.symmetric, r.minus_two_diagonal).unwrap();
    writeln!(text, "det = {}", r.det).unwrap();
    writeln!(text, "signature = {:?}", r.signature).unwrap();
    let parts: Vec<String> = r.primary_parts.iter().map(|q| format!("Z/{}", q)).collect();
    writeln!(text, "discriminant group: {}", parts.join(" x ")).unwrap();
    writeln!(text, "generated by two elements: {}", r.at_most_two_generators).unwrap();
    if let Some(ok) = roundtrip {
        writeln!(text, "export round-trip identical: {}", ok).unwrap();
    }
    let code = if roundtrip == Some(false) { EXIT_REFUTED } else { EXIT_VERIFIED };
    Ok(Output {
        code,
        json: json!({
            "status": "ok",
            "catalogue_hash": cache.key(),
            "report": r,
            "gram": g,
            "export_roundtrip": roundtrip,
        }),
        text,
    })
}

fn saturation(cache: &Cache) -> Result<Output> {
    let data = cache.lattice_data()?;
    let r = report::saturation_report(&data)?;
    let mut text = String::new();
    writeln!(text, "mod-2 candidates: {{{}}}", r.mod2_candidates.join(", ")).unwrap();
    writeln!(text, "pairing with D′ over F25: {:?}", r.mod2_pairings_with_dprime).unwrap();
    writeln!(text, "mod-3 candidates: {{{}}}", r.mod3_candidates.join(", ")).unwrap();
    writeln!(text, "fiber over [0:1]: {{{}}}", r.fiber_components.join(", ")).unwrap();
    writeln!(text, "det M′ over F25 = {}, D′ orbit: {} curves", r.alternate_det_mod5, r.dprime_orbit_size).unwrap();
    writeln!(text, "S(2,5) = 2M′: {}", r.s25_equals_2m).unwrap();
    writeln!(text, "S(3,5) ⊆ 3M′ + Z({}): {}", r.s35_vector, r.s35_in_3m_plus_d).unwrap();
    Ok(Output {
        code: EXIT_VERIFIED,
        json: json!({ "status": "ok", "catalogue_hash": cache.key(), "report": r }),
        text,
    })
}

fn cohomology(cache: &Cache, a: &CohomologyArgs) -> Result<Output> {
    let data = cache.lattice_data()?;
    let am = data.action();
    let (name, h) = match (&a.surface, &a.subgroup) {
        (Some(c), _) => (
            format!("surface ({}, {}, {})", c[0], c[1], c[2]),
            report::subgroup_for_coefficients(c[0], c[1], c[2])?,
        ),
        (None, Some(tag)) => (format!("subgroup {}", tag), report::subgroup_for_tag(tag, &am)?),
        (None, None) => unreachable!("clap enforces one of --surface/--subgroup"),
    };
    let r = report::subgroup_cohomology(&am, &h)?;
    let mut text = format!(
        "{}: |H| = {}, H¹(H, P̄) = {}, 2-torsion dimension {}\n",
        name, r.order, r.description, r.two_torsion_dimension
    );
    let mut body = json!({ "status": "ok", "catalogue_hash": cache.key(), "group": name, "result": r });
    match a.subgroup.as_deref() {
        Some("cube") => {
            let q = report::quaternion_torsion(&am)?;
            writeln!(
                text,
                "H₁ of order {}, H₂ of order {}; class of d1-d4 in H¹(H₁)[2] nonzero: {}, on H₂: {}",
                q.h1_order, q.h2_order, q.class_nonzero_on_h1, q.class_nonzero_on_h2
            )
            .unwrap();
            body["quaternion"] = serde_json::to_value(q)?;
        }
        Some("k") => {
            let n = report::norm_report(&data)?;
            let inv: Vec<String> = n.invariant_factors.iter().map(|d| format!("Z/{}", d)).collect();
            writeln!(
                text,
                "ker N/im Δ = {}; d1+d4-d13-d13′ = {} has order {}",
                inv.join(" x "),
                n.candidate,
                n.candidate_order.map_or("undefined (not in ker N)".to_string(), |o| o.to_string())
            )
            .unwrap();
            body["norm"] = serde_json::to_value(n)?;
        }
        _ => {}
    }
    Ok(Output {
        code: EXIT_VERIFIED,
        json: body,
        text,
    })
}

fn certificate_text(cert: &Certificate) -> String {
    let mut text = String::new();
    let s = &cert.surface;
    writeln!(text, "surface: w² = {}x⁶ + {}y⁶ + {}z⁶", s.a, s.b, s.c).unwrap();
    for r in &cert.places {
        let vals: Vec<String> = r.values.iter().map(|v| v.to_string()).collect();
        let nonzero = r.values.iter().any(|v| !v.is_zero()) || !r.certified || !r.solubility.is_soluble();
        if nonzero {
            writeln!(
                text,
                "  v = {}: values {{{}}}{}",
                r.v,
                vals.join(", "),
                if r.certified { "" } else { " (witnessed only)" }
            )
            .unwrap();
        }
    }
    writeln!(text, "  all other places: {{0}}").unwrap();
    let sum: Vec<String> = cert.sum_set.iter().map(|v| v.to_string()).collect();
    writeln!(text, "sum set: {{{}}}", sum.join(", ")).unwrap();
    writeln!(text, "verdict: {}", status_of(cert.verdict).0).unwrap();
    text
}

fn verify(cfg: &VerdictConfig, a: &VerifyArgs) -> Result<Output> {
    if let Some(q) = &a.quat {
        let (qa, qb, qc) = (parse_big(&q[0])?, parse_big(&q[1])?, parse_big(&q[2])?);
        let conds = check_quat_conditions(&qa, &qb, &qc);
        if !conds.passed() {
            let mut failed = conds.failed().iter().map(|s| s.to_string()).collect::<Vec<_>>();
            if !conds.odd {
                failed.insert(0, "odd".into());
            }
            return Ok(Output {
                code: EXIT_PRECONDITION,
                text: format!("conditions failed: {}\n", failed.join(", ")),
                json: json!({ "status": "precondition_failed", "conditions": conds, "certificate": null }),
            });
        }
        let d = QuaternionAlgebraDatum::from_big(qa, qb, qc)?;
        let cert = bm_verdict(&AlgebraDatum::Quaternion(d), cfg)?;
        let (status, code) = status_of(cert.verdict);
        return Ok(Output {
            code,
            text: certificate_text(&cert),
            json: json!({ "status": status, "conditions": conds, "certificate": cert }),
        });
    }
    let p = parse_big(a.cubic.as_deref().expect("clap enforces --quat or --cubic"))?;
    let proof = prove_prime(&p)?;
    let coprime = (&p % 42u32) != BigInt::from(0) && p > BigInt::from(7);
    let Some(proof) = proof.filter(|_| coprime) else {
        return Ok(Output {
            code: EXIT_PRECONDITION,
            text: format!("{} is not a prime coprime to 42\n", p),
            json: json!({ "status": "precondition_failed", "p": p.to_string(), "certificate": null }),
        });
    };
    let d = CubicAlgebraDatum::family(&p)?;
    let cert = bm_verdict(&AlgebraDatum::Cubic(d.clone()), cfg)?;
    let s7 = split_scan(&d, &BigInt::from(7), &cfg.cover)?;
    let s2 = congruence_scan(&d, &BigInt::from(2), 3, &cfg.cover)?;
    let (status, code) = status_of(cert.verdict);
    let mut text = certificate_text(&cert);
    writeln!(
        text,
        "7-adic scan: both u± units impossible: {}; u₊ residues mod 7 when 7 | u₋: {:?}",
        s7.both_units_impossible(),
        s7.plus_residues()
    )
    .unwrap();
    writeln!(text, "2-adic scan: f ≡ 1 mod 8 on every class: {}", s2.certified && s2.all_congruent()).unwrap();
    Ok(Output {
        code,
        text,
        json: json!({
            "status": status,
            "primality": proof,
            "certificate": cert,
            "scans": { "p7": s7, "p2": s2 },
        }),
    })
}

fn search(cfg: &VerdictConfig, a: &SearchArgs) -> Result<Output> {
    if a.quat {
        let bound = a.bound.expect("clap requires --bound");
        let found = search_quat(bound, cfg)?;
        let mut text = String::new();
        let mut code = EXIT_VERIFIED;
        let mut rows = Vec::new();
        for (r, cert) in &found {
            let (status, c) = status_of(cert.verdict);
            code = code.max(c);
            let sum: Vec<String> = cert.sum_set.iter().map(|v| v.to_string()).collect();
            writeln!(text, "({}, {}, {}): {} {{{}}}", r.a, r.b, r.c, status, sum.join(", ")).unwrap();
            rows.push(json!({ "a": r.a.to_string(), "b": r.b.to_string(), "c": r.c.to_string(), "status": status, "certificate": cert }));
        }
        writeln!(text, "{} triples", found.len()).unwrap();
        return Ok(Output {
            code,
            text,
            json: json!({ "status": "ok", "bound": bound, "results": rows }),
        });
    }
    if a.cubic {
        let count = a.count.expect("clap requires --count");
        let r = search_cubic_primes(count, cfg)?;
        let mut text = String::new();
        for c in &r.certified {
            writeln!(text, "k = {}: p = {} certifies", c.k, c.p).unwrap();
        }
        for (k, p, v) in &r.rejected {
            writeln!(text, "k = {}: p = {} rejected ({})", k, p, status_of(*v).0).unwrap();
        }
        writeln!(text, "{} composite candidates skipped", r.composite).unwrap();
        return Ok(Output {
            code: EXIT_VERIFIED,
            text,
            json: json!({ "status": "ok", "search": r }),
        });
    }
    Err(Error::Degenerate("search needs --quat --bound N or --cubic --count k".into()))
}

fn points(a: &PointsArgs) -> Result<Output> {
    let s = IntSurface::new(parse_big(&a.surface[0])?, parse_big(&a.surface[1])?, parse_big(&a.surface[2])?);
    let r = search_points(&s, a.bound);
    let mut text = String::new();
    for p in &r.points {
        writeln!(text, "(x, y, z, w) = ({}, {}, {}, {})", p[0], p[1], p[2], p[3]).unwrap();
    }
    writeln!(text, "{} points up to height {} ({} exact tests)", r.points.len(), r.bound, r.exact_tests).unwrap();
    Ok(Output {
        code: EXIT_VERIFIED,
        text,
        json: json!({ "status": "ok", "search": r }),
    })
}

fn selftest(seed: u64, a: &SelftestArgs) -> Output {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || loop {
        let v: i64 = rng.gen_range(-10_000..=10_000);
        if v != 0 {
            return Rational::from_integer(BigInt::from(v));
        }
    };
    let (mut bimult, mut product) = (0usize, 0usize);
    for _ in 0..a.pairs {
        let (x, y, z) = (draw(), draw(), draw());
        let yz = &y * &z;
        let mut places = hilbert_support(&x, &yz);
        for v in hilbert_support(&x, &y).into_iter().chain(hilbert_support(&x, &z)) {
            if !places.contains(&v) {
                places.push(v);
            }
        }
        if places.iter().all(|v| hilbert2(&x, &y, v) + hilbert2(&x, &z, v) == hilbert2(&x, &yz, v)) {
            bimult += 1;
        }
        let total = hilbert_support(&x, &y)
            .iter()
            .fold(InvariantValue::ZERO, |acc, v: &Place| acc + hilbert2(&x, &y, v));
        if total.is_zero() {
            product += 1;
        }
    }
    let ok = bimult == a.pairs && product == a.pairs;
    Output {
        code: if ok { EXIT_VERIFIED } else { EXIT_REFUTED },
        text: format!(
            "seed {}: bimultiplicativity {}/{}, product formula {}/{}\n",
            seed, bimult, a.pairs, product, a.pairs
        ),
        json: json!({
            "status": if ok { "ok" } else { "failed" },
            "seed": seed,
            "pairs": a.pairs,
            "bimultiplicativity": bimult,
            "product_formula": product,
        }),
    }
}
