use std::collections::BTreeSet;

use knaster_core::amalgam::{amalgamate, joint_project, AmalgamError, Amalgamation};
use knaster_core::fraisse::{
    approx_degree, build_generic, build_generic_with_bound, fiber_distance, realize_degree, separation_extension, AnnotatedObject,
    AutomorphismApprox, Category, FraisseError, GenericSequence,
};
use knaster_core::lingraph::{compose, count_epi, EpiIter, Morphism, MorphismError, PointedLinearGraph};
use knaster_core::plmaps::{
    chain_tower, commute_check, discretize, fine_chain, lift, pl_degree, tent, validate_tower, PLOpenMap, PlError,
    Rat,
};
use knaster_core::ramsey::{
    degree_coloring, find_monochromatic, infinite_degree_check, ramsey_number, random_coloring, rho, witness,
    Coloring, RamseyError,
};
use knaster_core::Rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::input;
use crate::{CategoryArg, Cli, Verb};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {message}")]
    Domain { name: &'static str, message: String },
}

fn domain(name: &'static str, message: impl Into<String>) -> CliError {
    CliError::Domain {
        name,
        message: message.into(),
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                domain(e.name(), e.to_string())
            }
        }
    )*};
}

domain_from!(MorphismError, AmalgamError, FraisseError, RamseyError, PlError);

fn graph(n: usize) -> Result<PointedLinearGraph, CliError> {
    Ok(PointedLinearGraph::new(n)?)
}

fn weight(s: &str) -> Result<Rational, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("`{s}` is not a positive rational")))
}

fn rat(s: &str) -> Result<Rat, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a rational"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i128 = n.trim().parse().map_err(|_| bad())?;
    let d: i128 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn annotated(size: usize, w: &str) -> Result<AnnotatedObject, CliError> {
    Ok(AnnotatedObject::new(size, weight(w)?)?)
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("library types serialize")
}

fn morphism_json(f: &Morphism) -> Value {
    json!({
        "dom": f.dom_size(),
        "cod": f.cod_size(),
        "values": f.values(),
        "degree": f.degree(),
    })
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, field: &str) -> Result<T, CliError> {
    let part = v
        .get(field)
        .ok_or_else(|| domain("CheckFailed", format!("missing field `{field}`")))?;
    serde_json::from_value(part.clone()).map_err(|e| domain("CheckFailed", format!("field `{field}`: {e}")))
}

fn category(c: CategoryArg) -> Category {
    match c {
        CategoryArg::K => Category::K,
        CategoryArg::Kstar => Category::Kstar,
    }
}

fn coloring_hash(c: &Coloring) -> String {
    let bytes = serde_json::to_vec(c).expect("colorings serialize");
    hex::encode(Sha256::digest(&bytes))
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Validate { .. } => "validate",
        Verb::Compose { .. } => "compose",
        Verb::Enumerate { .. } => "enumerate",
        Verb::Amalgamate { .. } => "amalgamate",
        Verb::JointProject { .. } => "joint-project",
        Verb::GenericBuild { .. } => "generic-build",
        Verb::GenericVerify { .. } => "generic-verify",
        Verb::Separate { .. } => "separate",
        Verb::RealizeDegree { .. } => "realize-degree",
        Verb::RamseyNumber { .. } => "ramsey-number",
        Verb::RamseyWitness { .. } => "ramsey-witness",
        Verb::MonoSearch { .. } => "mono-search",
        Verb::DegreeColor { .. } => "degree-color",
        Verb::InfiniteDegree { .. } => "infinite-degree",
        Verb::Tent { .. } => "tent",
        Verb::Discretize { .. } => "discretize",
        Verb::Lift { .. } => "lift",
        Verb::ChainTower { .. } => "chain-tower",
        Verb::Commute { .. } => "commute",
    }
}

pub fn run(cli: &Cli) -> Result<Value, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let output = execute(cli)?;
    let Some(path) = &cli.check else {
        return Ok(output);
    };
    let text = input::resolve(&format!("@{}", path.trim_start_matches('@')))?;
    let claimed: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path} is not JSON: {e}")))?;
    certify(&cli.verb, &claimed)?;
    if claimed != output {
        return Err(domain("CheckFailed", "recomputed output differs from the file"));
    }
    Ok(json!({ "check": "ok", "verb": verb_name(&cli.verb) }))
}

/// Independent checks of the certificates inside an emitted output.
fn certify(verb: &Verb, v: &Value) -> Result<(), CliError> {
    let fail = |msg: &str| Err(domain("CheckFailed", msg));
    match verb {
        Verb::Validate { .. } | Verb::Lift { .. } | Verb::DegreeColor { .. } => {
            let dom: usize = parse(v, "dom")?;
            let cod: usize = parse(v, "cod")?;
            let values: Vec<usize> = parse(v, "values")?;
            let f = knaster_core::validate(dom, cod, &values)?;
            if parse::<usize>(v, "degree")? != f.degree() {
                return fail("degree does not match");
            }
        }
        Verb::Compose { .. } => {
            let outer: Morphism = parse(v, "outer")?;
            let inner: Morphism = parse(v, "inner")?;
            let result: Morphism = parse(v, "result")?;
            if compose(&outer, &inner)? != result {
                return fail("composite does not match");
            }
        }
        Verb::Amalgamate { .. } => {
            let am: Amalgamation = parse(v, "amalgamation")?;
            if !am.verify() {
                return fail("amalgamation square does not commute");
            }
        }
        Verb::GenericBuild { .. } | Verb::GenericVerify { .. } => {
            if let Some(tower) = v.get("tower") {
                let seq: GenericSequence = serde_json::from_value(tower.clone())
                    .map_err(|e| domain("CheckFailed", e.to_string()))?;
                seq.verify()?;
            }
        }
        Verb::Separate { .. } => {
            let seq: GenericSequence = parse(v, "tower")?;
            seq.verify()?;
            let sep: knaster_core::fraisse::Separation = parse(v, "separation")?;
            let down = seq.composite(sep.level, sep.certificate.level)?;
            if fiber_distance(&down, sep.x, sep.y).is_none_or(|d| d <= 2) {
                return fail("fibers are not separated");
            }
        }
        Verb::RealizeDegree { p, q, .. } => {
            let seq: GenericSequence = parse(v, "tower")?;
            seq.verify()?;
            let a: AutomorphismApprox = parse(v, "approx")?;
            if approx_degree(&a, &seq)? != Rational::new(*p as u64, *q as u64).map_err(|e| domain("Zero", e.to_string()))? {
                return fail("degree does not match p/q");
            }
        }
        Verb::MonoSearch { .. } => {
            let a: AnnotatedObject = parse(v, "a")?;
            let b: AnnotatedObject = parse(v, "b")?;
            let c: AnnotatedObject = parse(v, "c")?;
            let coloring: Coloring = parse(v, "coloring")?;
            let hash: String = parse(v, "coloring_hash")?;
            if coloring_hash(&coloring) != hash {
                return fail("coloring hash does not match");
            }
            let g: Morphism = parse(v, "g")?;
            if g.dom() != c.graph || g.cod() != b.graph {
                return fail("g does not map C onto B");
            }
            let deg_cb = (c.weight / b.weight).as_integer();
            if deg_cb != Some(g.degree() as u64) {
                return fail("g has the wrong degree");
            }
            let mut colors = BTreeSet::new();
            if let Some(r) = (b.weight / a.weight).as_integer() {
                for h in EpiIter::new(b.graph, a.graph, Some(r as usize)) {
                    let hg = compose(&h, &g)?;
                    colors.insert(coloring.color(&hg).ok_or_else(|| domain("CheckFailed", "coloring is not total"))?);
                }
            }
            if colors.len() > 1 {
                return fail("composed copies are not monochromatic");
            }
        }
        _ => {}
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Value, CliError> {
    let seed = cli.seed;
    Ok(match &cli.verb {
        Verb::Validate { values, cod } => morphism_json(&input::morphism(values, *cod)?),
        Verb::Compose {
            outer,
            outer_cod,
            inner,
            inner_cod,
        } => {
            let o = input::morphism(outer, *outer_cod)?;
            let i = input::morphism(inner, *inner_cod)?;
            let r = compose(&o, &i)?;
            json!({ "outer": to_value(&o), "inner": to_value(&i), "result": to_value(&r), "degree": r.degree() })
        }
        Verb::Enumerate {
            dom,
            cod,
            degree,
            limit,
            count,
        } => {
            let (b, a) = (graph(*dom)?, graph(*cod)?);
            if *count {
                let total: Value = match degree {
                    None => match count_epi(b, a) {
                        Some(c) => json!(c.to_string()),
                        None => json!(null),
                    },
                    Some(d) => json!(EpiIter::new(b, a, Some(*d)).count().to_string()),
                };
                json!({ "dom": dom, "cod": cod, "degree": degree, "count": total })
            } else {
                let it = EpiIter::new(b, a, *degree);
                let list: Vec<Vec<usize>> = match limit {
                    Some(l) => it.take(*l).map(|f| f.values().to_vec()).collect(),
                    None => it.map(|f| f.values().to_vec()).collect(),
                };
                json!({ "dom": dom, "cod": cod, "degree": degree, "morphisms": list })
            }
        }
        Verb::Amalgamate { f, f_cod, g, g_cod } => {
            let f = input::morphism(f, *f_cod)?;
            let g = input::morphism(g, *g_cod)?;
            let am = amalgamate(&f, &g)?;
            let common = compose(&am.f, &am.f_prime)?;
            json!({
                "amalgamation": to_value(&am),
                "commutes": am.verify(),
                "common": to_value(&common),
            })
        }
        Verb::JointProject { a, b } => {
            let (c, pa, pb) = joint_project(graph(*a)?, graph(*b)?)?;
            json!({ "c": c.size(), "to_a": to_value(&pa), "to_b": to_value(&pb) })
        }
        Verb::GenericBuild {
            category: cat,
            budget,
            resume,
        } => {
            let seq = match resume {
                None => build_generic(category(*cat), *budget, seed)?,
                Some(path) => {
                    let old = input::tower(path)?;
                    old.verify()?;
                    let seq = build_generic_with_bound(
                        old.category,
                        *budget,
                        old.seed,
                        old.size_bound,
                    )?;
                    if seq.objects.len() < old.objects.len() || seq.objects[..old.objects.len()] != old.objects[..] {
                        return Err(domain("Inconsistent", "the resumed build does not extend the given tower"));
                    }
                    seq
                }
            };
            json!({
                "levels": seq.len(),
                "certificates": seq.certificates.len(),
                "pending": seq.pending.len(),
                "tower": to_value(&seq),
            })
        }
        Verb::GenericVerify { tower } => {
            let seq = input::tower(tower)?;
            seq.verify()?;
            json!({ "ok": true, "levels": seq.len(), "certificates": seq.certificates.len() })
        }
        Verb::Separate {
            tower,
            level,
            x,
            y,
            extra_budget,
        } => {
            let mut seq = input::tower(tower)?;
            seq.verify()?;
            seq.budget += extra_budget;
            let sep = separation_extension(&mut seq, *level, *x, *y)?;
            json!({ "separation": to_value(&sep), "tower": to_value(&seq) })
        }
        Verb::RealizeDegree {
            tower,
            p,
            q,
            extra_budget,
        } => {
            let mut seq = match tower {
                Some(path) => {
                    let s = input::tower(path)?;
                    s.verify()?;
                    s
                }
                None => GenericSequence::trivial(Category::K, 1, seed)?,
            };
            seq.budget += extra_budget;
            let a = realize_degree(&mut seq, *p, *q)?;
            let deg = approx_degree(&a, &seq)?;
            json!({ "approx": to_value(&a), "degree": deg.to_string(), "tower": to_value(&seq) })
        }
        Verb::RamseyNumber { k, m, d, cap } => {
            json!({ "k": k, "m": m, "d": d, "cap": cap, "result": to_value(&ramsey_number(*k, *m, *d, *cap)?) })
        }
        Verb::RamseyWitness {
            a_size,
            a_weight,
            b_size,
            b_weight,
            d,
            cap,
        } => {
            let a = annotated(*a_size, a_weight)?;
            let b = annotated(*b_size, b_weight)?;
            json!({ "a": to_value(&a), "b": to_value(&b), "d": d, "result": to_value(&witness(&a, &b, *d, *cap)?) })
        }
        Verb::MonoSearch {
            a_size,
            a_weight,
            b_size,
            b_weight,
            c_size,
            c_weight,
            d,
            coloring,
        } => {
            let a = annotated(*a_size, a_weight)?;
            let b = annotated(*b_size, b_weight)?;
            let c = annotated(*c_size, c_weight)?;
            let deg = (c.weight / a.weight)
                .as_integer()
                .ok_or_else(|| domain("NonIntegerRatio", "C and A weights give no morphisms"))? as usize;
            let col = if coloring == "random" {
                random_coloring(c.graph, a.graph, deg, *d, &mut ChaCha8Rng::seed_from_u64(seed))?
            } else if let Some(k) = coloring.strip_prefix("const:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| CliError::Usage(format!("`{k}` is not a color")))?;
                Coloring::from_fn(*d, EpiIter::new(c.graph, a.graph, Some(deg)), |_| k)?
            } else {
                let col: Coloring = input::json_file(coloring)?;
                if col.d() != *d {
                    return Err(CliError::Usage(format!("the coloring uses {} colors, not {d}", col.d())));
                }
                col
            };
            let w = find_monochromatic(&c, &b, &a, &col)?;
            json!({
                "a": to_value(&a),
                "b": to_value(&b),
                "c": to_value(&c),
                "d": d,
                "coloring_hash": coloring_hash(&col),
                "g": to_value(&w.g),
                "color": w.color,
                "route": to_value(&w.route),
                "coloring": to_value(&col),
            })
        }
        Verb::DegreeColor { values, cod, n } => {
            let f = input::morphism(values, *cod)?;
            let mut v = morphism_json(&f);
            v["rho"] = json!(rho(f.degree() as u64)?);
            v["color"] = json!(degree_coloring(&f, *n)?);
            v
        }
        Verb::InfiniteDegree { n, c_size, sample } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            to_value(&infinite_degree_check(*n, graph(*c_size)?, *sample, &mut rng)?)
        }
        Verb::Tent { d } => {
            let t = tent(*d)?;
            json!({ "degree": pl_degree(&t), "knots": to_value(&t) })
        }
        Verb::Discretize {
            degree,
            map,
            fine,
            coarse,
            overlap,
        } => {
            let t: PLOpenMap = match (degree, map) {
                (Some(d), None) => tent(*d)?,
                (None, Some(path)) => input::json_file(path)?,
                _ => return Err(CliError::Usage("give exactly one of --degree and --map".into())),
            };
            let o = rat(overlap)?;
            let fine_c = fine_chain(*fine, o)?;
            let coarse_c = fine_chain(*coarse, o)?;
            let g = discretize(&t, &fine_c, &coarse_c)?;
            let mut v = morphism_json(&g);
            v["map_degree"] = json!(pl_degree(&t));
            v
        }
        Verb::Lift { values, cod } => {
            let f = input::morphism(values, *cod)?;
            let mut v = morphism_json(&f);
            let l = lift(&f);
            v["pl_degree"] = json!(pl_degree(&l));
            v["knots"] = to_value(&l);
            v
        }
        Verb::ChainTower { degrees, levels, full } => {
            let t = chain_tower(degrees, *levels)?;
            let r = validate_tower(&t)?;
            let frac = |q: &Rat| json!([q.numer(), q.denom()]);
            let mut v = json!({
                "degrees": t.degrees(),
                "links": r.links_per_level,
                "epsilons": r.epsilons.iter().map(frac).collect::<Vec<_>>(),
                "meshes": r.meshes.iter().map(frac).collect::<Vec<_>>(),
                "valid": true,
            });
            if *full {
                v["tower"] = to_value(&t);
            }
            v
        }
        Verb::Commute { c, d } => json!({ "c": c, "d": d, "commute": commute_check(*c, *d)? }),
    })
}
