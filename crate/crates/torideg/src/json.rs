//! JSON input parsing and deterministic report construction for the batch
//! commands. Fractions travel as `p/q` strings; reports use sorted maps so
//! repeated runs emit byte-identical documents.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::exact::{parse_rat, rat_str, Rat};
use crate::fanalgebra::{
    generator_set, kernel_bases, homogenize, initial_term, initial_term_lambda, shadow_report,
    verify_weight_vector, weight_vector, GeneratorSet, LiftCache, Monomial,
};
use crate::monoidfan::{component_report, degree_one_submonoid, fan_of_monoids, MonoidFan};
use crate::pipeline::{PipelineError, Stratification};
use crate::polytope::{FaceId, FaceLattice, GradedPoint, LatticePolytope};
use crate::stratify::Marking;
use crate::valuation::{nu_chain, quasi_valuation, quasi_valuation_via_min, QuasiValue};

fn input_error(msg: impl Into<String>) -> PipelineError {
    PipelineError::Input(msg.into())
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope, PipelineError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| input_error(format!("invalid JSON: {e}")))?;
    let dim = value
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| input_error("polytope JSON needs an integer `dim`"))? as usize;
    let vertices = value
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| input_error("polytope JSON needs a `vertices` array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| input_error("each vertex must be an array of integers"))?
                .iter()
                .map(|c| {
                    c.as_i64()
                        .ok_or_else(|| input_error("vertex coordinates must be integers"))
                })
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticePolytope::new(dim, vertices)?)
}

/// Face keys in marking files: a face id, or `P` for the whole polytope.
pub fn parse_face_key(key: &str, lattice: &FaceLattice) -> Result<FaceId, PipelineError> {
    if key == "P" {
        return Ok(lattice.top);
    }
    let id: FaceId = key
        .parse()
        .map_err(|_| input_error(format!("face key `{key}` is neither an id nor `P`")))?;
    if id >= lattice.face_count() {
        return Err(input_error(format!("face id {id} out of range")));
    }
    Ok(id)
}

/// Explicit marking files: `{"marking": {"<face-id>": ["p/q", ...]},
/// "multipliers": {"<face-id>": k}}`.
pub fn parse_marking(
    text: &str,
    lattice: &FaceLattice,
) -> Result<(Marking, BTreeMap<FaceId, i64>), PipelineError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| input_error(format!("invalid JSON: {e}")))?;
    let marking_obj = value
        .get("marking")
        .and_then(Value::as_object)
        .ok_or_else(|| input_error("marking JSON needs a `marking` object"))?;
    let mut points = BTreeMap::new();
    for (key, coords) in marking_obj {
        let face = parse_face_key(key, lattice)?;
        let point = coords
            .as_array()
            .ok_or_else(|| input_error("marked points must be arrays of `p/q` strings"))?
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rat(s).map_err(|e| input_error(e.to_string())),
                Value::Number(n) => n
                    .as_i64()
                    .map(crate::exact::rint)
                    .ok_or_else(|| input_error("coordinates must be integers or `p/q` strings")),
                _ => Err(input_error("coordinates must be integers or `p/q` strings")),
            })
            .collect::<Result<Vec<Rat>, _>>()?;
        points.insert(face, point);
    }
    let mut multipliers = BTreeMap::new();
    if let Some(obj) = value.get("multipliers").and_then(Value::as_object) {
        for (key, v) in obj {
            let face = parse_face_key(key, lattice)?;
            let k = v
                .as_i64()
                .ok_or_else(|| input_error("multipliers must be integers"))?;
            multipliers.insert(face, k);
        }
    }
    Ok((Marking { points }, multipliers))
}

/// Multiplier command-line syntax: `face=k[,face=k...]`.
pub fn parse_multipliers(
    specs: &[String],
    lattice: &FaceLattice,
) -> Result<BTreeMap<FaceId, i64>, PipelineError> {
    let mut out = BTreeMap::new();
    for spec in specs {
        for part in spec.split(',').filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| input_error(format!("bad multiplier `{part}`, want face=k")))?;
            let face = parse_face_key(key.trim(), lattice)?;
            let k: i64 = val
                .trim()
                .parse()
                .map_err(|_| input_error(format!("bad multiplier value in `{part}`")))?;
            out.insert(face, k);
        }
    }
    Ok(out)
}

/// Graded points from JSON: one object `{"m": int, "eta": [int, ...]}` or a
/// list of them.
pub fn parse_graded_points(text: &str, dim: usize) -> Result<Vec<GradedPoint>, PipelineError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| input_error(format!("invalid JSON: {e}")))?;
    let list = match &value {
        Value::Array(items) => items.clone(),
        _ => vec![value],
    };
    list.iter()
        .map(|item| {
            let m = item
                .get("m")
                .and_then(Value::as_i64)
                .ok_or_else(|| input_error("graded point needs integer `m`"))?;
            let eta = item
                .get("eta")
                .and_then(Value::as_array)
                .ok_or_else(|| input_error("graded point needs `eta` array"))?
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| input_error("`eta` must be integers")))
                .collect::<Result<Vec<i64>, _>>()?;
            if eta.len() != dim {
                return Err(input_error(format!(
                    "`eta` has {} coordinates, polytope dimension is {dim}",
                    eta.len()
                )));
            }
            Ok(GradedPoint::new(m, eta))
        })
        .collect()
}

/// Command-line point syntax: `m:(a,b,...)` or `m:a,b,...`.
pub fn parse_point_flag(spec: &str, dim: usize) -> Result<GradedPoint, PipelineError> {
    let (m_part, eta_part) = spec
        .split_once(':')
        .ok_or_else(|| input_error(format!("bad point `{spec}`, want m:(a,b,...)")))?;
    let m: i64 = m_part
        .trim()
        .parse()
        .map_err(|_| input_error(format!("bad level in `{spec}`")))?;
    let trimmed = eta_part.trim().trim_start_matches('(').trim_end_matches(')');
    let eta = trimmed
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| input_error(format!("bad coordinate in `{spec}`")))
        })
        .collect::<Result<Vec<i64>, _>>()?;
    if eta.len() != dim {
        return Err(input_error(format!(
            "point has {} coordinates, polytope dimension is {dim}",
            eta.len()
        )));
    }
    Ok(GradedPoint::new(m, eta))
}

pub fn graded_point_json(p: &GradedPoint) -> Value {
    json!({"m": p.level, "eta": p.point})
}

pub fn quasi_value_json(qv: &QuasiValue) -> Value {
    let mut map = Map::new();
    for (face, coeff) in &qv.0 {
        map.insert(face.to_string(), Value::String(rat_str(coeff)));
    }
    Value::Object(map)
}

pub fn rat_vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(rat_str(c))).collect())
}

pub fn monomial_json(m: &Monomial) -> Value {
    let mut map = Map::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e > 0 {
            map.insert(i.to_string(), json!(e));
        }
    }
    Value::Object(map)
}

/// Polynomials travel as a term list: `[{"coeff": "p/q", "exps": {i: e}}]`.
pub fn polynomial_json(f: &crate::fanalgebra::Polynomial) -> Value {
    Value::Array(
        f.0.iter()
            .map(|(m, c)| {
                json!({
                    "coeff": rat_str(c),
                    "exps": monomial_json(m),
                })
            })
            .collect(),
    )
}

pub fn faces_report(lattice: &FaceLattice) -> Value {
    let faces: Vec<Value> = lattice
        .faces
        .iter()
        .map(|f| {
            json!({
                "id": f.id,
                "dim": f.dim,
                "vertices": f.vertex_set.iter().map(|&v| lattice.vertices()[v].clone()).collect::<Vec<_>>(),
                "active_facets": f.active_facets,
            })
        })
        .collect();
    json!({
        "dim": lattice.dim(),
        "face_count": lattice.face_count(),
        "faces": faces,
        "hasse": lattice.covers,
        "maximal_chain_count": lattice.maximal_chains.len(),
        "maximal_chains": lattice.maximal_chains.iter().map(|c| c.faces.clone()).collect::<Vec<_>>(),
        "linearization": lattice.default_linearization(),
        "facets": lattice.hrep().facets.iter().map(|f| json!({"normal": f.normal, "offset": f.offset})).collect::<Vec<_>>(),
    })
}

pub fn normality_report(p: &LatticePolytope) -> Value {
    let (normal, witness) = p.is_normal();
    json!({
        "normal": normal,
        "witness": witness.map(|w| graded_point_json(&w)),
    })
}

pub fn triangulation_report(s: &Stratification) -> Value {
    let mut marking = Map::new();
    let mut degrees = Map::new();
    let mut weights = Map::new();
    for (&face, point) in &s.marking.points {
        marking.insert(face.to_string(), rat_vec_json(point));
        degrees.insert(face.to_string(), json!(s.extremal.degree(face)));
        weights.insert(face.to_string(), json!(s.extremal.lifted(face).clone()));
    }
    let simplices: Vec<Value> = s
        .tri
        .chains()
        .iter()
        .enumerate()
        .map(|(i, chain)| {
            json!({
                "chain": chain.faces,
                "vertices": s.tri.simplex(i).iter().map(|v| rat_vec_json(v)).collect::<Vec<_>>(),
                "volume": rat_str(&s.tri.simplex_volume(i)),
            })
        })
        .collect();
    let total: Rat = (0..s.tri.simplices.len())
        .map(|i| s.tri.simplex_volume(i))
        .sum();
    json!({
        "marking": Value::Object(marking),
        "degrees": Value::Object(degrees),
        "lifted_weights": Value::Object(weights),
        "simplices": simplices,
        "simplex_count": s.tri.simplices.len(),
        "volume_total": rat_str(&total),
        "volume_polytope": rat_str(&s.lattice.polytope.volume()),
    })
}

/// The valuation report for one formal sum of graded points: the value, the
/// chain realizing it, and the agreement of the two computation routes.
pub fn nu_report(s: &Stratification, terms: &[GradedPoint]) -> Result<Value, PipelineError> {
    let fast = quasi_valuation(terms, &s.tri, &s.extremal, &s.order)?;
    let oracle = quasi_valuation_via_min(terms, &s.tri, &s.extremal, &s.order)?;
    let chain_used = s
        .tri
        .chains()
        .iter()
        .position(|chain| {
            nu_chain(terms, chain, &s.extremal)
                .map(|cv| QuasiValue::from_map(cv.coeffs) == fast)
                .unwrap_or(false)
        })
        .map(|i| s.tri.chains()[i].faces.clone());
    let reconstructed = fast.reconstruct(&s.extremal, s.lattice.dim());
    Ok(json!({
        "terms": terms.iter().map(graded_point_json).collect::<Vec<_>>(),
        "nu": quasi_value_json(&fast),
        "chain_used": chain_used,
        "oracle_agrees": oracle == fast,
        "reconstruction": reconstructed.map(|p| graded_point_json(&p)),
    }))
}

pub fn fan_report(s: &Stratification, level_bound: i64) -> Result<Value, PipelineError> {
    let fan = fan_of_monoids(&s.tri, &s.extremal, level_bound)?;
    let components = component_report(&fan);
    let chains: Vec<Value> = fan
        .monoids
        .iter()
        .zip(&components)
        .map(|(cm, rec)| {
            let sub = degree_one_submonoid(&cm.chain, &s.tri);
            json!({
                "chain": cm.chain.faces,
                "rays": cm.cone.rays,
                "index": cm.index,
                "rank": rec.rank,
                "hilbert_basis": cm.hilbert_basis.iter().map(graded_point_json).collect::<Vec<_>>(),
                "hilbert_generates_truncation": rec.hilbert_generates_truncation,
                "degree_one_generators": sub.generators.iter().map(graded_point_json).collect::<Vec<_>>(),
                "degree_one_equals_monoid": rec.degree_one_equals_monoid,
            })
        })
        .collect();
    Ok(json!({
        "level_bound": level_bound,
        "chains": chains,
        "fan_condition_verified": true,
        "bijection_verified": true,
    }))
}

fn generators_json(gens: &GeneratorSet) -> Vec<Value> {
    gens.gens
        .iter()
        .map(|g| {
            json!({
                "m": g.point.level,
                "eta": g.point.point,
                "nu": quasi_value_json(&g.nu),
            })
        })
        .collect()
}

pub fn algebra_report(
    s: &Stratification,
    level_bound: i64,
    degree_bound: i64,
) -> Result<Value, PipelineError> {
    let fan = fan_of_monoids(&s.tri, &s.extremal, level_bound)?;
    let gens = generator_set(&fan, &s.tri, &s.extremal)?;
    let mut cache = LiftCache::new();
    let kb = kernel_bases(&gens, &s.tri, degree_bound, &s.order, &mut cache)?;
    let wv = weight_vector(&gens, degree_bound, &s.order);
    let verification = verify_weight_vector(&wv, &gens, &s.order);
    let mut initial_terms_agree = true;
    let mut homogenized_b1_positive_u = true;
    for f in kb.b1.iter().chain(&kb.b2) {
        let by_order = initial_term(f, &gens, &s.order)?;
        let by_lambda = initial_term_lambda(f, &wv.lambda)?;
        if by_order != by_lambda {
            initial_terms_agree = false;
        }
    }
    for f in &kb.b1 {
        let h = homogenize(f, &wv.lambda)?;
        let positive = h
            .terms
            .keys()
            .filter(|(_, u)| u > &num_bigint::BigInt::from(0))
            .count();
        if positive != 1 {
            homogenized_b1_positive_u = false;
        }
    }
    let per_degree: Vec<Value> = kb
        .per_degree
        .iter()
        .map(|r| {
            json!({
                "degree": r.degree,
                "monomials": r.monomial_count,
                "weights": r.weight_count,
                "b1bar": r.b1bar_count,
                "b2": r.b2_count,
                "dimension_identity": r.dimension_identity,
                "initial_span_rank": r.initial_span_rank,
                "bbar_span_rank": r.bbar_span_rank,
                "spans_equal": r.spans_equal,
            })
        })
        .collect();
    let (pairs, ties) = match &verification {
        Ok(counts) => *counts,
        Err(_) => (0, 0),
    };
    Ok(json!({
        "level_bound": level_bound,
        "degree_bound": degree_bound,
        "generators": generators_json(&gens),
        "level_one_count": gens.level_one_count,
        "kernel": {
            "b1_count": kb.b1.len(),
            "b2_count": kb.b2.len(),
            "b3_count": kb.b3.len(),
            "b1": kb.b1.iter().map(polynomial_json).collect::<Vec<_>>(),
            "b2": kb.b2.iter().map(polynomial_json).collect::<Vec<_>>(),
            "b3": kb.b3.iter().map(monomial_json).collect::<Vec<_>>(),
            "per_degree": per_degree,
        },
        "lambda": wv.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "lambda_window": degree_bound,
        "lambda_order_verified": verification.is_ok(),
        "lambda_pairs_checked": pairs,
        "lambda_ties_checked": ties,
        "initial_terms_agree": initial_terms_agree,
        "homogenized_b1_positive_u": homogenized_b1_positive_u,
    }))
}

pub fn shadow_report_json(
    s: &Stratification,
    level_bound: i64,
    degree_bound: i64,
) -> Result<Value, PipelineError> {
    let fan = fan_of_monoids(&s.tri, &s.extremal, level_bound)?;
    let gens = generator_set(&fan, &s.tri, &s.extremal)?;
    let report = shadow_report(&gens, &s.tri, &s.extremal, &fan, degree_bound)?;
    let chains: Vec<Value> = report
        .chains
        .iter()
        .map(|c| {
            json!({
                "chain": c.chain.faces,
                "degree_one_generators": c.degree_one_generators.iter().map(graded_point_json).collect::<Vec<_>>(),
                "degree_one_equals_monoid": c.degree_one_equals_monoid,
            })
        })
        .collect();
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "monomial": monomial_json(&e.monomial),
                "point": graded_point_json(&e.point),
                "witness": e.witness.map(|(k, ci)| json!({
                    "k": k,
                    "chain": report.chains[ci].chain.faces,
                })),
            })
        })
        .collect();
    Ok(json!({
        "degree_bound": report.degree_bound,
        "chains": chains,
        "non_minimal_entries": entries,
        "all_witnessed": report.all_witnessed,
    }))
}

/// Fan of monoids needed by callers that reuse the assembled run.
pub fn build_fan(s: &Stratification, level_bound: i64) -> Result<MonoidFan, PipelineError> {
    Ok(fan_of_monoids(&s.tri, &s.extremal, level_bound)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{assemble, BuildOptions, MarkingMode};
    use crate::polytope::unit_square;

    #[test]
    fn polytope_round_trip() {
        let p = parse_polytope(r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1],[1,1]]}"#).unwrap();
        assert_eq!(p.dim(), 2);
        assert!(parse_polytope(r#"{"dim": 2}"#).is_err());
        assert!(parse_polytope(r#"{"dim": 2, "vertices": [[0,0],[1,0],[2,0]]}"#).is_err());
    }

    #[test]
    fn marking_and_multiplier_parsing() {
        let lattice = unit_square().face_lattice();
        let text = r#"{
            "marking": {
                "8": ["1/2", "1/2"],
                "P": ["1/3", "1/3"]
            },
            "multipliers": {"P": 2}
        }"#;
        let (marking, mult) = parse_marking(text, &lattice).unwrap();
        // the later `P` key overrides id 8 (same face)
        assert_eq!(marking.points[&lattice.top], vec![crate::exact::rat(1, 3); 2]);
        assert_eq!(mult[&lattice.top], 2);

        let flags = vec!["P=2".to_string()];
        let m2 = parse_multipliers(&flags, &lattice).unwrap();
        assert_eq!(m2[&lattice.top], 2);
    }

    #[test]
    fn point_parsing() {
        assert_eq!(
            parse_point_flag("3:(1,0)", 2).unwrap(),
            GradedPoint::new(3, vec![1, 0])
        );
        assert_eq!(
            parse_point_flag("2:1,1", 2).unwrap(),
            GradedPoint::new(2, vec![1, 1])
        );
        assert!(parse_point_flag("3:(1,0)", 3).is_err());
        let pts = parse_graded_points(r#"[{"m":1,"eta":[0,0]},{"m":2,"eta":[1,1]}]"#, 2).unwrap();
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn reports_are_deterministic() {
        let s = assemble(unit_square(), MarkingMode::Barycentric, BuildOptions::default())
            .unwrap();
        let a = serde_json::to_string_pretty(&triangulation_report(&s)).unwrap();
        let b = serde_json::to_string_pretty(&triangulation_report(&s)).unwrap();
        assert_eq!(a, b);
        let fr = faces_report(&s.lattice);
        assert_eq!(fr["face_count"], 9);
        assert_eq!(fr["maximal_chain_count"], 8);
    }

    #[test]
    fn nu_report_example() {
        let p = unit_square();
        let lattice = p.face_lattice();
        let mult = std::collections::BTreeMap::from([(lattice.top, 2)]);
        let s = assemble(
            p,
            MarkingMode::Barycentric,
            BuildOptions { multipliers: mult, alternative_order: false },
        )
        .unwrap();
        let terms = vec![GradedPoint::new(3, vec![1, 0])];
        let rep = nu_report(&s, &terms).unwrap();
        assert_eq!(rep["oracle_agrees"], true);
        let nu = rep["nu"].as_object().unwrap();
        assert_eq!(nu.len(), 2);
        assert!(nu.values().all(|v| v == "1"));
    }
}
