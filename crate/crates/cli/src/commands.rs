use metab_core::charspace::{build_V, fmt_rational, halfspace_test, m_tame_check, plain_sum_check, vector_sum, Character, VEntry};
use metab_core::cohomology::{fixed_point_order, h2_report};
use metab_core::exactalg::{LocalizedElement, Setup};
use metab_core::geometry::{
    connectivity_precondition, crt_normalize, line_intersection_sup, orbit_reps, reduce, stabilizer_data, tree_ball,
    w_project_ceil, TreeContext,
};
use metab_core::sigma::{
    sigma_c_theoremB_data, verify_theoremB, GridSpec, SearchBounds, SigmaVerdict, Witness, WitnessSearcher,
};
use metab_core::valuations::{val_eval, ValuationId};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::input::{parse_element, parse_ints, parse_rationals, SetupFile};
use crate::report::{character, ext_int, rational, Report};
use crate::{CliError, Command, SetupArgs};

type Result<T> = std::result::Result<T, CliError>;

fn setup_file(args: &SetupArgs) -> Result<SetupFile> {
    match (&args.setup, args.k, &args.polys) {
        (Some(path), _, _) => SetupFile::read(path),
        (None, Some(k), Some(polys)) => SetupFile::from_flags(k, polys),
        _ => Err(CliError::Input("a setup is required: --setup FILE or --k K --polys \"f0, f1, ...\"".into())),
    }
}

fn load(args: &SetupArgs) -> Result<(SetupFile, Setup)> {
    let file = setup_file(args)?;
    let setup = Setup::validate(file.to_data())?;
    Ok((file, setup))
}

fn parse_valuation(setup: &Setup, name: &str) -> Result<ValuationId> {
    let name = name.trim();
    let bad = || CliError::Input(format!("unknown valuation \"{}\" (use w, v0, v1, ..., or p<prime>)", name));
    let id = if name == "w" {
        ValuationId::Degree
    } else if let Some(i) = name.strip_prefix('v') {
        ValuationId::FAdic(i.parse().map_err(|_| bad())?)
    } else if let Some(p) = name.strip_prefix('p') {
        ValuationId::PAdic(p.parse().map_err(|_| bad())?)
    } else {
        return Err(bad());
    };
    id.check(setup)?;
    Ok(id)
}

fn parse_character(setup: &Setup, s: &str) -> Result<Character> {
    let coords = parse_rationals(s)?;
    if coords.len() != setup.q_rank() {
        return Err(CliError::Input(format!(
            "character \"{}\" has {} coordinates, the setup needs {}",
            s,
            coords.len(),
            setup.q_rank()
        )));
    }
    Ok(Character::new(coords)?)
}

fn parse_bounds(s: Option<&String>) -> Result<SearchBounds> {
    let Some(s) = s else { return Ok(SearchBounds::default()) };
    match parse_ints(s)?[..] {
        [support, exp_box, degree] if support > 0 && exp_box >= 0 && degree > 0 => {
            Ok(SearchBounds { support: support as usize, exp_box, degree: degree as usize })
        }
        _ => Err(CliError::Input(format!("bounds \"{}\" must be support,exp_box,degree with positive entries", s))),
    }
}

fn bounds_json(b: &SearchBounds) -> Value {
    json!({"support": b.support, "exp_box": b.exp_box, "degree": b.degree})
}

fn witness_json(w: &Witness, names: &[String]) -> Value {
    json!({
        "rendered": w.render(names),
        "terms": w.terms.iter().map(|(c, q)| json!({"coeff": c.to_string(), "exps": q.exps()})).collect::<Vec<_>>(),
    })
}

/// Position in `V` of the class of `c`.
fn v_index(v: &[VEntry], c: &Character) -> Option<usize> {
    v.iter().position(|e| e.character.same_class(c))
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Validate(args) => validate(args),
        Command::Val { setup, elem, valuation } => val(setup, elem, valuation),
        Command::Chars { setup, chars } => chars_cmd(setup, chars.as_deref()),
        Command::Witness { setup, chars, bounds } => witness(setup, chars, bounds.as_ref()),
        Command::Tame { setup, m, .. } => tame(setup, *m),
        Command::VerifyTheoremb { setup, bounds, radius, max_classes } => {
            verify(setup, bounds.as_ref(), *radius, *max_classes)
        }
        Command::TreeBall { setup, valuation, seeds, window } => tree(setup, valuation, seeds, window),
        Command::Orbits { setup, point } => orbits(setup, point.as_deref()),
        Command::Crt { setup, labels, heights } => crt(setup, labels, heights),
        Command::Stabilizer { setup, sw } => stabilizer(setup, *sw),
        Command::Connectivity { setup, m } => connectivity(setup, *m),
        Command::H2 { setup } => h2(setup),
        Command::Fixedpoints { setup, k, values } => fixedpoints(setup.as_ref(), *k, values.as_deref()),
    }
}

fn validate(args: &SetupArgs) -> Result<Report> {
    let file = setup_file(args)?;
    let mut r = Report::new("validate", Some(&file));
    match Setup::validate(file.to_data()) {
        Ok(s) => {
            let degs = s.degrees();
            let degs_txt: Vec<String> = degs.iter().map(|d| d.to_string()).collect();
            r.line(format!("valid: k={}, block degrees [{}], beta={}", s.k(), degs_txt.join(","), s.beta()));
            r.line(format!("blocks: {}, m = {}, free rank = {}", s.block_count(), s.m(), s.free_rank()));
            for &(b, i) in s.asserted_irreducible() {
                r.line(format!("asserted irreducible: f[{}][{}]", b + 1, i));
            }
            r.result = json!({
                "valid": true,
                "k": s.k(),
                "degrees": degs,
                "beta": s.beta(),
                "block_ranks": s.block_ranks(),
                "m": s.m(),
                "free_rank": s.free_rank(),
                "asserted_irreducible": s.asserted_irreducible().iter().map(|&(b, i)| vec![b, i]).collect::<Vec<_>>(),
            });
        }
        Err(metab_core::Error::InvalidSetup(v)) => {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            r.line("invalid:");
            for m in &msgs {
                r.line(format!("  - {}", m));
            }
            r.result = json!({"valid": false, "violations": msgs});
            r.status = 1;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

fn val(args: &SetupArgs, elem: &str, names: &[String]) -> Result<Report> {
    let (file, s) = load(args)?;
    let e = parse_element(&s, elem)?;
    let ids: Vec<ValuationId> = if names.is_empty() {
        build_V(&s)?.into_iter().map(|v| v.id).collect()
    } else {
        names.iter().map(|n| parse_valuation(&s, n)).collect::<Result<_>>()?
    };
    let mut r = Report::new("val", Some(&file));
    r.line(format!("element: {}", e));
    let mut vals = serde_json::Map::new();
    for id in ids {
        let v = val_eval(id, &e)?;
        r.line(format!("{}: {}", id, v));
        vals.insert(id.name(), ext_int(v));
    }
    r.result = json!({"element": e.to_string(), "valuations": vals});
    Ok(r)
}

fn chars_cmd(args: &SetupArgs, chars: Option<&str>) -> Result<Report> {
    let (file, s) = load(args)?;
    let mut r = Report::new("chars", Some(&file));
    let names = s.basis_names();
    match chars {
        None => {
            let v = build_V(&s)?;
            let mut entries = Vec::new();
            for e in &v {
                r.line(format!("{}: {}  (q_v = {})", e.id, e.character, e.q_v.render(&names)));
                entries.push(json!({
                    "name": e.id.name(),
                    "character": character(&e.character),
                    "q_v": e.q_v.exps(),
                }));
            }
            let chars: Vec<Character> = v.iter().map(|e| e.character.clone()).collect();
            let zero = vector_sum(&chars).iter().all(|x| x.is_zero());
            let sum_name: Vec<String> = v.iter().map(|e| e.id.name()).collect();
            r.line(format!("{} = 0: {}", sum_name.join("+"), zero));
            r.result = json!({"basis": names, "V": entries, "sum_is_zero": zero});
        }
        Some(list) => {
            let cs = list.split(';').map(|c| parse_character(&s, c)).collect::<Result<Vec<_>>>()?;
            let h = halfspace_test(&cs)?;
            r.line(format!("open halfspace: {}", h.separated));
            let witness = h.witness.as_ref().map(|u| u.iter().map(rational).collect::<Vec<_>>());
            if let Some(u) = &h.witness {
                let parts: Vec<String> = u.iter().map(fmt_rational).collect();
                r.line(format!("normal: ({})", parts.join(", ")));
            }
            r.result = json!({
                "characters": cs.iter().map(character).collect::<Vec<_>>(),
                "separated": h.separated,
            });
            if let Some(w) = witness {
                r.certificates = json!([{"normal": w}]);
            }
        }
    }
    Ok(r)
}

fn witness(args: &SetupArgs, chars: &str, bounds: Option<&String>) -> Result<Report> {
    let (file, s) = load(args)?;
    let v = parse_character(&s, chars)?;
    let bounds = parse_bounds(bounds)?;
    let verdict = WitnessSearcher::new(&s, bounds).search(&v)?;
    let names = s.basis_names();
    let mut r = Report::new("witness", Some(&file));
    match &verdict {
        SigmaVerdict::InSigma(w) => {
            r.line(format!("{} in Sigma: lambda = {}", v, w.render(&names)));
            r.certificates = json!([witness_json(w, &names)]);
        }
        SigmaVerdict::NoWitnessWithinBounds(b) => r.line(format!(
            "{}: no witness within bounds (support {}, box {}, degree {})",
            v, b.support, b.exp_box, b.degree
        )),
    }
    r.result = json!({"class": character(&v), "in_sigma": verdict.is_in_sigma(), "bounds": bounds_json(&bounds)});
    Ok(r)
}

fn tame(args: &SetupArgs, m: usize) -> Result<Report> {
    let (file, s) = load(args)?;
    let fam = sigma_c_theoremB_data(s.n())?;
    let v = build_V(&s)?;
    let res = m_tame_check(&fam, m);
    let plain = plain_sum_check(&fam, m)?;
    let mut r = Report::new("tame", Some(&file));
    match &res.certificate {
        None => r.line(format!("{}-tame: {}", m, res.tame)),
        Some(cert) => {
            let idx: Option<Vec<usize>> = cert.iter().map(|c| v_index(&v, c)).collect();
            let sums_to_zero = vector_sum(cert).iter().all(|x| x.is_zero());
            let text = match idx {
                Some(mut ix) if sums_to_zero => {
                    ix.sort_unstable();
                    let n: Vec<String> = ix.iter().map(|&i| v[i].id.name()).collect();
                    format!("{}=0", n.join("+"))
                }
                _ => {
                    let cs: Vec<String> = cert.iter().map(|c| c.to_string()).collect();
                    format!("0 in the open positive span of {}", cs.join(", "))
                }
            };
            r.line(format!("{}-tame: false, certificate: {}", m, text));
            r.certificates = json!([{
                "characters": cert.iter().map(character).collect::<Vec<_>>(),
                "cones": res.cone_indices.as_ref().map(|ix| ix.iter().map(|&i| fam.cones[i].label.clone()).collect::<Vec<_>>()),
            }]);
        }
    }
    r.line(format!("plain-sum {}-tame: {}", m, plain.tame));
    r.result = json!({"m": m, "tame": res.tame, "plain_sum_tame": plain.tame});
    Ok(r)
}

fn verify(args: &SetupArgs, bounds: Option<&String>, radius: i64, max_classes: usize) -> Result<Report> {
    let (file, s) = load(args)?;
    if radius < 1 {
        return Err(CliError::Input("radius must be at least 1".into()));
    }
    let bounds = parse_bounds(bounds)?;
    let grid = GridSpec { radius, max_classes: (max_classes > 0).then_some(max_classes) };
    let rep = verify_theoremB(&s, grid, bounds)?;
    let names = s.basis_names();
    let mut r = Report::new("verify-theoremb", Some(&file));
    let in_family = rep.entries.iter().filter(|e| e.family_cone.is_some()).count();
    let witnesses = rep.entries.iter().filter(|e| e.verdict.is_in_sigma()).count();
    r.line(format!("classes: {}, in complement family: {}, with witness: {}", rep.entries.len(), in_family, witnesses));
    r.line(format!("anomalies: {}", rep.anomalies.len()));
    r.anomalies = rep.anomalies.iter().map(|a| a.to_string()).collect();
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            json!({
                "class": character(&e.class),
                "family_cone": e.family_cone,
                "witness": match &e.verdict {
                    SigmaVerdict::InSigma(w) => witness_json(w, &names),
                    SigmaVerdict::NoWitnessWithinBounds(_) => Value::Null,
                },
            })
        })
        .collect();
    r.result = json!({
        "classes": rep.entries.len(),
        "in_family": in_family,
        "with_witness": witnesses,
        "bounds": bounds_json(&bounds),
        "radius": radius,
    });
    r.certificates = Value::Array(entries);
    if !rep.anomalies.is_empty() {
        r.status = 2;
    }
    Ok(r)
}

fn tree(args: &SetupArgs, valuation: &str, seeds: &str, window: &str) -> Result<Report> {
    let (file, s) = load(args)?;
    let id = parse_valuation(&s, valuation)?;
    let ctx = TreeContext::new(&s, id)?;
    let seeds = seeds.split(',').map(|x| parse_element(&s, x)).collect::<Result<Vec<LocalizedElement>>>()?;
    let (lo, hi) = match parse_ints(window)?[..] {
        [lo, hi] if lo <= hi => (lo, hi),
        _ => return Err(CliError::Input(format!("window \"{}\" must be lo,hi with lo <= hi", window))),
    };
    let ball = tree_ball(&ctx, &seeds, lo, hi)?;
    let mut r = Report::new("tree-ball", Some(&file));
    r.line(format!(
        "tree {}: vertices {}, edges {}, tree: {}",
        id,
        ball.vertices.len(),
        ball.edges.len(),
        ball.is_tree()
    ));
    let mut sups = Vec::new();
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            let z0 = line_intersection_sup(&ctx, &seeds[i], &seeds[j])?;
            r.line(format!("z0({}, {}) = {}", seeds[i], seeds[j], z0));
            sups.push(json!({"a": i, "b": j, "z0": ext_int(z0)}));
        }
    }
    r.result = json!({
        "valuation": id.name(),
        "beta": ctx.beta,
        "window": [lo, hi],
        "vertices": ball.vertices.iter().map(|v| json!({"z": v.z, "label": v.label.to_string()})).collect::<Vec<_>>(),
        "edges": ball.edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        "is_tree": ball.is_tree(),
        "intersections": sups,
    });
    Ok(r)
}

fn orbits(args: &SetupArgs, point: Option<&str>) -> Result<Report> {
    let (file, s) = load(args)?;
    let mut r = Report::new("orbits", Some(&file));
    let reps = orbit_reps(&s);
    r.line(format!("orbit representatives: {}", reps.len()));
    for p in &reps {
        r.line(format!("  {:?}", p.coords));
    }
    let mut result = json!({"representatives": reps.iter().map(|p| p.coords.clone()).collect::<Vec<_>>()});
    if let Some(pt) = point {
        let y = parse_rationals(pt)?;
        let proj = w_project_ceil(&s, &y)?;
        r.line(format!("in W: {}, ceiling {:?}, bound form {}", proj.in_w, proj.ceil.coords, proj.bound_value));
        let mut info = json!({
            "in_w": proj.in_w,
            "ceiling": proj.ceil.coords,
            "bound_value": proj.bound_value,
        });
        if proj.in_w {
            let (rep, q) = reduce(&s, &proj.ceil)?;
            r.line(format!("representative {:?} via {}", rep.coords, q.render(&s.basis_names())));
            info["representative"] = json!(rep.coords);
            info["translation"] = json!(q.exps());
        }
        result["point"] = info;
    }
    r.result = result;
    Ok(r)
}

fn crt(args: &SetupArgs, labels: &str, heights: &str) -> Result<Report> {
    let (file, s) = load(args)?;
    let labels = labels.split(',').map(|x| parse_element(&s, x)).collect::<Result<Vec<_>>>()?;
    let heights = parse_ints(heights)?;
    let res = crt_normalize(&s, &labels, &heights)?;
    let mut r = Report::new("crt", Some(&file));
    r.line(format!("a = {}", res.a));
    r.line(format!("t = {}, a' = {}", res.t, res.a_prime));
    r.result = json!({
        "a": res.a.to_string(),
        "a_prime": res.a_prime.coeffs().iter().map(rational).collect::<Vec<_>>(),
        "t": res.t,
        "reduced_heights": res.reduced_heights,
    });
    Ok(r)
}

fn stabilizer(args: &SetupArgs, sw: i64) -> Result<Report> {
    let (file, s) = load(args)?;
    let st = stabilizer_data(&s, sw)?;
    let ok = st.membership_ok()?;
    if !ok {
        return Err(CliError::Consistency("a stabilizer basis element fails the valuation bounds".into()));
    }
    let mut r = Report::new("stabilizer", Some(&file));
    r.line(format!("s_w = {}: d = {}, rank = {}", sw, st.d, st.rank));
    if let Some(h) = &st.hnn {
        r.line(format!("presentation: {}", h.render()));
    }
    r.result = json!({
        "s_w": sw,
        "d": st.d,
        "rank": st.rank,
        "basis": st.basis.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "membership_ok": ok,
        "hnn": st.hnn.as_ref().map(|h| json!({
            "generators": h.generators,
            "relation_exponent": h.relation_exponent,
            "presentation": h.render(),
        })),
    });
    Ok(r)
}

fn connectivity(args: &SetupArgs, m: usize) -> Result<Report> {
    let (file, s) = load(args)?;
    let c = connectivity_precondition(&s, m)?;
    let mut r = Report::new("connectivity", Some(&file));
    r.line(format!("every {}-subset of V lies in an open halfspace: {}", m, c.holds));
    let failing = c.failing.as_ref().map(|f| f.iter().map(|v| v.name()).collect::<Vec<_>>());
    if let Some(f) = &failing {
        r.line(format!("failing subset: {{{}}}", f.join(", ")));
    }
    r.result = json!({"m": m, "holds": c.holds, "failing": failing});
    Ok(r)
}

fn h2(args: &SetupArgs) -> Result<Report> {
    let (file, s) = load(args)?;
    let h = h2_report(&s)?;
    let mut r = Report::new("h2", Some(&file));
    r.line(format!("H2 order (Theorem C): {}; fixed-point order: {}", h.theorem_c, h.fixed_point));
    if !h.agree() {
        r.line("note: the two computations disagree");
    }
    r.result = json!({"theorem_c": h.theorem_c.order, "fixed_point": h.fixed_point.order, "agree": h.agree()});
    Ok(r)
}

fn fixedpoints(path: Option<&std::path::PathBuf>, k: Option<u64>, values: Option<&str>) -> Result<Report> {
    let loaded = match path {
        Some(p) => {
            let file = SetupFile::read(p)?;
            let setup = Setup::validate(file.to_data())?;
            Some((file, setup))
        }
        None => None,
    };
    let (k, values) = match (&loaded, k, values) {
        (_, Some(k), Some(v)) => (k, parse_ints(v)?),
        (Some((_, s)), None, Some(v)) => (s.k(), parse_ints(v)?),
        (Some((_, s)), None, None) => {
            let vals = s
                .values_at_one()
                .iter()
                .map(|v| i64::try_from(v).map_err(|_| CliError::Input(format!("value {} out of range", v))))
                .collect::<Result<Vec<_>>>()?;
            (s.k(), vals)
        }
        _ => return Err(CliError::Input("fixedpoints needs --setup, or --k with --values".into())),
    };
    let o = fixed_point_order(k, &values)?;
    let mut r = Report::new("fixedpoints", loaded.as_ref().map(|(f, _)| f));
    r.line(format!("fixed-point order: {}", o));
    r.result = json!({"k": k, "values": values, "order": o.order});
    Ok(r)
}
