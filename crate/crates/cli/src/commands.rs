use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Value};

use weilres::binomial::{
    axiom_suite, guard_stability, is_binomial_sanity, BinomialRing, Integers, Localized, Rationals, RingDescriptor,
};
use weilres::csa::{
    base_change_hom, hom_generator, motive_iso_test, weil_restrict_hom_element, weil_restrict_obj, BrauerModel, CsaHom,
    CsaObject, ModelRegistry,
};
use weilres::motive::{
    decomposition_report, dimension_identity_check, dimension_identity_weighted, exceptional_collection_report,
    restrict_class_map, restrict_class_rows, stabilizer_coverage, GaloisContext, OrbitRow,
};
use weilres::orbit::{burnside_count, orbits_with_cap, DEFAULT_ENUMERATION_CAP};
use weilres::polymap::{compose, extend_scalars, CertifiedMap, CertifyOptions, PointedMap};
use weilres::schema::{context_from_json, registry_from_json};

use crate::report::{read_json, CliError, Outcome};
use crate::{BinomArgs, Command, CsaOp, PolymapArgs};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Orbits { ctx, n, cap } => orbits(&ctx.context, *n, *cap),
        Command::Restrict { ctx, n, ring_label } => restrict(&ctx.context, *n, ring_label.as_deref()),
        Command::RestrictClass { ctx, m } => restrict_class(&ctx.context, m),
        Command::Coverage { ctx, n } => coverage(&ctx.context, *n),
        Command::Dimcheck { ctx, n } => dimcheck(&ctx.context, *n),
        Command::Excoll { ctx, scheme, n, dim } => excoll(&ctx.context, scheme, *n, *dim),
        Command::Polymap(args) => polymap(args),
        Command::Binom(args) => binom(args),
        Command::Csa { models, op } => csa(models.as_deref(), op),
    }
}

fn load_context(path: &Path) -> Result<(GaloisContext, Value)> {
    let raw = read_json(path)?;
    Ok((context_from_json(raw.clone())?, raw))
}

fn orbits(path: &Path, n: u32, cap: u64) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let set = orbits_with_cap(ctx.group(), ctx.cosets(), n, cap)?;
    let count = burnside_count(ctx.group(), ctx.cosets(), n)?;
    let records = set.records();
    let mut text = format!("{} orbits on {{G/H -> 1..{n}}}, [G:H] = {}\n", set.len(), ctx.degree());
    for r in &records {
        let rep: Vec<String> = r.rep.iter().map(u32::to_string).collect();
        text.push_str(&format!("  [{}]  size={}  stab={:?}\n", rep.join(","), r.size, r.stab));
    }
    Ok(Outcome {
        command: "orbits",
        input: json!({"context": raw, "n": n, "cap": cap}),
        result: json!({
            "degree": ctx.degree(),
            "count": set.len(),
            "burnside_count": count.to_string(),
            "orbits": records,
        }),
        text,
    })
}

fn restrict(path: &Path, n: u32, ring_label: Option<&str>) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let report = decomposition_report(&ctx, n)?;
    Ok(Outcome {
        command: "restrict",
        input: json!({"context": raw, "n": n}),
        result: report.to_json(),
        text: report.render_text_with(ring_label),
    })
}

fn rows_json(rows: &[OrbitRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "rep": r.rep,
                    "stabilizer": r.stabilizer,
                    "stab_index": r.stab_index,
                    "field": r.field.display,
                    "coefficient": r.coefficient.to_string(),
                })
            })
            .collect(),
    )
}

fn restrict_class(path: &Path, m: &[i64]) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let (sum, rows) = restrict_class_rows(&ctx, m, DEFAULT_ENUMERATION_CAP)?;
    let check = dimension_identity_weighted(&ctx, m)?;
    let text = format!(
        "{}\ndimension: {} = {} ({})\n",
        sum,
        check.total,
        check.expected,
        if check.holds { "holds" } else { "FAILS" }
    );
    Ok(Outcome {
        command: "restrict-class",
        input: json!({"context": raw, "m": m}),
        result: json!({
            "decomposition": sum.to_json(),
            "orbits": rows_json(&rows),
            "dimension": {"holds": check.holds, "total": check.total.to_string(), "expected": check.expected.to_string()},
        }),
        text,
    })
}

fn coverage(path: &Path, n: u32) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let report = stabilizer_coverage(&ctx, n)?;
    let mut text = format!("covered: {}\n", report.covered);
    for e in &report.entries {
        text.push_str(&format!("  {} (degree {}): witness {:?}\n", e.field, e.field.degree, e.witness));
    }
    Ok(Outcome { command: "coverage", input: json!({"context": raw, "n": n}), result: report.to_json(), text })
}

fn dimcheck(path: &Path, n: u32) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let check = dimension_identity_check(&ctx, n)?;
    let text = format!(
        "sum of [G:stab] over {} orbits = {}, n^d = {}: {}\n",
        check.rows.len(),
        check.total,
        check.expected,
        if check.holds { "holds" } else { "FAILS" }
    );
    Ok(Outcome { command: "dimcheck", input: json!({"context": raw, "n": n}), result: check.to_json(), text })
}

fn excoll(path: &Path, scheme: &str, n: u32, dim: Option<u32>) -> Result<Outcome> {
    let (ctx, raw) = load_context(path)?;
    let report = exceptional_collection_report(&ctx, scheme, n, dim)?;
    Ok(Outcome {
        command: "excoll",
        input: json!({"context": raw, "scheme": scheme, "n": n, "dim": dim}),
        result: report.to_json(),
        text: report.render_text(),
    })
}

fn stage_map(stage: &str, args: &PolymapArgs, raw_ctx: &mut Option<Value>) -> Result<PointedMap> {
    if stage == "restrict-class" {
        let path = args.context.as_deref().ok_or_else(|| CliError::Usage("restrict-class needs --context".into()))?;
        let n = args.n.ok_or_else(|| CliError::Usage("restrict-class needs --n".into()))?;
        let (ctx, raw) = load_context(path)?;
        *raw_ctx = Some(raw);
        let (map, _) = restrict_class_map(&ctx, n)?;
        return Ok(map);
    }
    PointedMap::builtin(stage).ok_or_else(|| CliError::Usage(format!("unknown map `{stage}`")))
}

fn parse_point(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| CliError::Usage(format!("bad integer `{t}`"))))
        .collect()
}

fn ring_eval<R: BinomialRing + Clone>(map: &CertifiedMap, ring: &R, xs: &[String]) -> Result<Value> {
    let ext = extend_scalars(map, ring)?;
    let mut out = Vec::new();
    for x in xs {
        let point = x.split(',').map(|t| ring.parse(t.trim())).collect::<std::result::Result<Vec<_>, _>>()?;
        let value = ext.eval(&point)?;
        out.push(json!({"x": x, "value": value.iter().map(|v| ring.render(v)).collect::<Vec<_>>()}));
    }
    Ok(json!({"ring": ring.descriptor(), "points": out}))
}

fn polymap(args: &PolymapArgs) -> Result<Outcome> {
    let opts = CertifyOptions { max_degree: args.max_degree, box_bound: args.r#box, budget: args.budget };
    let mut raw_ctx = None;
    let mut stages = args.expr.split(">>").map(str::trim);
    let first = stages.next().filter(|s| !s.is_empty()).ok_or_else(|| CliError::Usage("empty expression".into()))?;
    let mut map = CertifiedMap::certify(stage_map(first, args, &mut raw_ctx)?, &opts)?;
    for stage in stages {
        let next = CertifiedMap::certify(stage_map(stage, args, &mut raw_ctx)?, &opts)?;
        map = compose(&map, &next, &opts)?;
    }
    let ext = map.extension();
    let mut evals = Vec::new();
    for p in &args.eval {
        let x = parse_point(p)?;
        let v = ext.eval(&x)?;
        evals.push(json!({"x": p, "value": v.iter().map(ToString::to_string).collect::<Vec<_>>()}));
    }
    let ring_value = match &args.ring {
        None => Value::Null,
        Some(desc) => {
            let d: RingDescriptor = desc.parse()?;
            match d {
                RingDescriptor::Integers => ring_eval(&map, &Integers, &args.x)?,
                RingDescriptor::Rationals => ring_eval(&map, &Rationals, &args.x)?,
                RingDescriptor::Localized { r } => ring_eval(&map, &Localized::new(r)?, &args.x)?,
                RingDescriptor::TruncatedPAdic { .. } => ring_eval(&map, &d.padic()?.expect("p-adic"), &args.x)?,
            }
        }
    };
    let cert = map.certificate();
    let mut text = format!("{}: degree {} (box 0..={}, {} tuples)\n", args.expr, cert.degree, cert.box_bound, cert.tuples_checked);
    for e in &evals {
        text.push_str(&format!("  f({}) = {}\n", e["x"].as_str().unwrap_or(""), e["value"]));
    }
    if let Some(points) = ring_value.get("points").and_then(Value::as_array) {
        for p in points {
            text.push_str(&format!("  f_R({}) = {}\n", p["x"].as_str().unwrap_or(""), p["value"]));
        }
    }
    Ok(Outcome {
        command: "polymap",
        input: json!({
            "expr": args.expr, "context": raw_ctx, "n": args.n, "eval": args.eval, "ring": args.ring, "x": args.x,
            "box": args.r#box, "max_degree": args.max_degree, "budget": args.budget,
        }),
        result: json!({
            "arity_in": map.map().arity_in(),
            "arity_out": map.map().arity_out(),
            "certificate": cert.to_json(),
            "evaluations": evals,
            "scalar_extension": ring_value,
        }),
        text,
    })
}

fn binom_in<R: BinomialRing>(ring: &R, args: &BinomArgs) -> Result<(Value, String)> {
    let mut result = json!({"ring": ring.descriptor()});
    let mut text = format!("ring {}\n", ring.descriptor());
    if let (Some(x), Some(n)) = (&args.x, args.n) {
        let xv = ring.parse(x)?;
        let v = ring.binom(&xv, n)?;
        let v = ring.render(&v);
        result["binom"] = json!({"x": x, "n": n, "value": v});
        text.push_str(&format!("binom({x}, {n}) = {v}\n"));
    } else if args.x.is_some() != args.n.is_some() {
        return Err(CliError::Usage("--x and --n go together".into()));
    }
    if args.axioms {
        let report = axiom_suite(ring, args.samples, args.seed);
        for r in &report.results {
            text.push_str(&format!(
                "axiom {}: {} ({} checks){}\n",
                r.label,
                if r.passed { "holds" } else { "FAILS" },
                r.checks,
                r.counterexample.as_ref().map(|c| format!(", counterexample {c}")).unwrap_or_default()
            ));
        }
        result["axioms"] = serde_json::to_value(&report).expect("serializable");
    }
    if args.sanity {
        let report = is_binomial_sanity(ring, args.seed);
        text.push_str(&format!("torsion-free: {}, closed under binom: {}\n", report.torsion_free, report.closed));
        result["sanity"] = serde_json::to_value(&report).expect("serializable");
    }
    Ok((result, text))
}

fn binom(args: &BinomArgs) -> Result<Outcome> {
    let desc: RingDescriptor = args.ring.parse()?;
    let (mut result, mut text) = match &desc {
        RingDescriptor::Integers => binom_in(&Integers, args)?,
        RingDescriptor::Rationals => binom_in(&Rationals, args)?,
        RingDescriptor::Localized { r } => binom_in(&Localized::new(*r)?, args)?,
        RingDescriptor::TruncatedPAdic { .. } => binom_in(&desc.padic()?.expect("p-adic"), args)?,
    };
    if let (true, Some(zp)) = (args.axioms, desc.padic()?) {
        let guards = (zp.guard(), zp.guard() + 8);
        let stab = guard_stability(zp.prime(), zp.precision(), guards, args.samples, args.seed)?;
        text.push_str(&format!("stable across guards {guards:?}: {}\n", stab.stable));
        result["guard_stability"] = serde_json::to_value(&stab).expect("serializable");
    }
    Ok(Outcome {
        command: "binom",
        input: json!({
            "ring": desc, "x": args.x, "n": args.n, "axioms": args.axioms, "sanity": args.sanity,
            "samples": args.samples, "seed": args.seed,
        }),
        result,
        text,
    })
}

/// `<class>[:<degree>]`; the degree defaults to the index.
fn parse_object(model: &std::sync::Arc<BrauerModel>, token: &str) -> Result<CsaObject> {
    let (class, degree) = match token.rsplit_once(':') {
        Some((c, d)) => (c, Some(d.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad degree in `{token}`")))?)),
        None => (token, None),
    };
    let class = model.parse_class(class)?;
    Ok(match degree {
        Some(d) => CsaObject::new(model.clone(), class, d)?,
        None => CsaObject::division(model.clone(), class)?,
    })
}

fn parse_value(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("bad integer `{s}`")))
}

fn csa(models: Option<&Path>, op: &CsaOp) -> Result<Outcome> {
    let raw = models.map(read_json).transpose()?;
    let reg: ModelRegistry = registry_from_json(raw.clone())?;
    let (command, params, result, text) = match op {
        CsaOp::Hom { field, from, to, value } => {
            let m = reg.get(field)?;
            let (a, b) = (parse_object(&m, from)?, parse_object(&m, to)?);
            let generator = hom_generator(&a, &b)?;
            let mut result = json!({"source": a.to_json(), "target": b.to_json(), "generator": generator});
            let mut text = format!("Hom(U({from}), U({to})) = {generator}·Z\n");
            if let Some(v) = value {
                let h = CsaHom::from_value(a, b, parse_value(v)?)?;
                text.push_str(&format!("{v} = {} · {}\n", h.multiple(), h.generator()));
                result["hom"] = h.to_json();
            }
            ("csa hom", json!({"field": field, "from": from, "to": to, "value": value}), result, text)
        }
        CsaOp::Restrict { k, l, degree, class, value } => {
            let lm = reg.get(l)?;
            let d = CsaObject::division(lm.clone(), lm.parse_class(class)?)?;
            let obj = weil_restrict_obj(&reg, k, *degree, &d)?;
            let mut result = json!({"input": d.to_json(), "restriction": obj.to_json()});
            let mut text = format!("R({class}) over {k}: class {}, degree {}\n", obj.class(), obj.degree());
            if let Some(v) = value {
                let h = CsaHom::from_value(CsaObject::unit(lm), d, parse_value(v)?)?;
                let rh = weil_restrict_hom_element(&reg, k, *degree, &h)?;
                text.push_str(&format!("hom value {v} -> {}\n", rh.value()));
                result["hom"] = json!({"from": h.to_json(), "to": rh.to_json()});
            }
            ("csa restrict", json!({"k": k, "l": l, "degree": degree, "class": class, "value": value}), result, text)
        }
        CsaOp::Basechange { field, to_field, from, to, value } => {
            let m = reg.get(field)?;
            let h = CsaHom::from_value(parse_object(&m, from)?, parse_object(&m, to)?, parse_value(value)?)?;
            let out = base_change_hom(&reg, &h, to_field)?;
            let text = format!(
                "value {} : {}·Z -> {}·Z\n",
                out.value(),
                h.generator(),
                out.generator()
            );
            (
                "csa basechange",
                json!({"field": field, "to_field": to_field, "from": from, "to": to, "value": value}),
                json!({"before": h.to_json(), "after": out.to_json()}),
                text,
            )
        }
        CsaOp::Iso { field, a, b } => {
            let m = reg.get(field)?;
            let iso = motive_iso_test(&parse_object(&m, a)?, &parse_object(&m, b)?)?;
            ("csa iso", json!({"field": field, "a": a, "b": b}), json!({"isomorphic": iso}), format!("U({a}) ≅ U({b}): {iso}\n"))
        }
    };
    let mut input = params;
    input["models"] = raw.unwrap_or(Value::Null);
    Ok(Outcome { command, input, result, text })
}
