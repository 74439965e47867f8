//! JSON encodings. Integers below `2^53` in absolute value are numbers,
//! larger ones decimal strings; rationals are `"p/q"` strings in lowest terms.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::LatticeBasis;
use crate::mckay::{CoefficientDrop, GroupData, LedgerEntry, LedgerKind, McKayReport, RankChecks};
use crate::mmp::{ExtractionStep, FlopStep, MmpStep, MmpStepKind, WallRef};
use crate::num::{Int, LatticeVector, Rat};
use crate::pair::ToricPair;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

const SAFE: i64 = 1 << 53;

fn bad(what: &str, v: &Value) -> Error {
    Error::invalid(format!("expected {what}, got {v}"))
}

pub fn int_to_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE => json!(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| bad("an integer", v)),
        Value::String(s) => s.trim().parse().map_err(|_| bad("an integer", v)),
        _ => Err(bad("an integer", v)),
    }
}

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

/// Accepts `"p/q"`, `"p"` or an integer.
pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => {
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p: Int = p.trim().parse().map_err(|_| bad("a rational", v))?;
            let q: Int = q.trim().parse().map_err(|_| bad("a rational", v))?;
            if q.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s}")));
            }
            Ok(Rat::new(p, q))
        }
        _ => int_from_json(v).map(Rat::from_integer),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::invalid(format!("missing field \"{key}\"")))
}

pub fn vec_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn vec_from_json(v: &Value) -> Result<LatticeVector> {
    array(v, "an integer vector")?
        .iter()
        .map(int_from_json)
        .collect()
}

fn rats_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

fn rats_from_json(v: &Value) -> Result<Vec<Rat>> {
    array(v, "a list of rationals")?
        .iter()
        .map(rat_from_json)
        .collect()
}

fn vecs_to_json(v: &[LatticeVector]) -> Value {
    Value::Array(v.iter().map(|x| vec_to_json(x)).collect())
}

fn vecs_from_json(v: &Value) -> Result<Vec<LatticeVector>> {
    array(v, "a list of vectors")?
        .iter()
        .map(vec_from_json)
        .collect()
}

pub fn fan_to_json(f: &Fan) -> Value {
    json!({
        "dim": f.dim(),
        "rays": vecs_to_json(f.rays()),
        "cones": f.cones(),
    })
}

pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let dim = field(v, "dim")?
        .as_u64()
        .ok_or_else(|| bad("a dimension", v))? as usize;
    let rays = vecs_from_json(field(v, "rays")?)?;
    let cones = array(field(v, "cones")?, "a list of cones")?
        .iter()
        .map(|c| {
            array(c, "a cone")?
                .iter()
                .map(|i| {
                    i.as_u64()
                        .map(|i| i as usize)
                        .ok_or_else(|| bad("a ray index", i))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Fan::new(dim, rays, cones)
}

pub fn lattice_to_json(l: &LatticeBasis) -> Value {
    Value::Array(l.basis().iter().map(|r| rats_to_json(r)).collect())
}

pub fn lattice_from_json(v: &Value) -> Result<LatticeBasis> {
    let rows: Vec<Vec<Rat>> = array(v, "a lattice basis")?
        .iter()
        .map(rats_from_json)
        .collect::<Result<_>>()?;
    let l = LatticeBasis::from_generators(&rows)?;
    if rows.len() != l.dim() {
        return Err(Error::invalid("lattice basis must have exactly n vectors"));
    }
    Ok(l)
}

/// Fan fields plus `"coeffs"`; `"lattice"` (basis rows in `Q^n`) only when
/// it is not the standard lattice. Rays are coordinates in that basis.
pub fn pair_to_json(p: &ToricPair) -> Value {
    let mut v = fan_to_json(&p.fan);
    let m = v.as_object_mut().expect("object");
    m.insert("coeffs".into(), rats_to_json(&p.coeffs));
    if p.lattice != LatticeBasis::standard(p.dim()) {
        m.insert("lattice".into(), lattice_to_json(&p.lattice));
    }
    v
}

pub fn pair_from_json(v: &Value) -> Result<ToricPair> {
    let mut fan = fan_from_json(v)?;
    let coeffs = match v.get("coeffs") {
        Some(c) => rats_from_json(c)?,
        None => vec![Rat::from_integer(Int::from(0)); fan.rays().len()],
    };
    let lattice = match v.get("lattice") {
        Some(l) => {
            // rays are given in the listed basis; store them in the Hermite one
            let given: Vec<Vec<Rat>> = array(l, "a lattice basis")?
                .iter()
                .map(rats_from_json)
                .collect::<Result<_>>()?;
            let lattice = lattice_from_json(l)?;
            let rays = fan
                .rays()
                .iter()
                .map(|y| {
                    let amb: Vec<Rat> = (0..fan.dim())
                        .map(|k| {
                            y.iter()
                                .zip(&given)
                                .map(|(c, row)| &row[k] * Rat::from_integer(c.clone()))
                                .sum()
                        })
                        .collect();
                    lattice
                        .coords_of(&amb)
                        .ok_or_else(|| Error::invariant("basis change left the lattice"))
                })
                .collect::<Result<_>>()?;
            fan = Fan::new(fan.dim(), rays, fan.cones().to_vec())?;
            lattice
        }
        None => LatticeBasis::standard(fan.dim()),
    };
    ToricPair::new(fan, coeffs, lattice)
}

pub fn group_to_json(g: &GroupData) -> Value {
    serde_json::to_value(g).expect("group serializes")
}

pub fn group_from_json(v: &Value) -> Result<GroupData> {
    let g: GroupData =
        serde_json::from_value(v.clone()).map_err(|e| Error::invalid(format!("group: {e}")))?;
    g.validate()?;
    Ok(g)
}

pub fn wall_to_json(w: &WallRef) -> Value {
    json!({
        "shared": vecs_to_json(&w.shared),
        "apexes": vecs_to_json(&w.apexes),
        "circuit": w.circuit.iter().map(|(v, a)| json!({"ray": vec_to_json(v), "coeff": int_to_json(a)})).collect::<Vec<_>>(),
    })
}

pub fn wall_from_json(v: &Value) -> Result<WallRef> {
    let apexes = vecs_from_json(field(v, "apexes")?)?;
    let apexes: [LatticeVector; 2] = apexes
        .try_into()
        .map_err(|_| Error::invalid("a wall has two apexes"))?;
    let circuit = array(field(v, "circuit")?, "a circuit")?
        .iter()
        .map(|c| {
            Ok((
                vec_from_json(field(c, "ray")?)?,
                int_from_json(field(c, "coeff")?)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(WallRef {
        shared: vecs_from_json(field(v, "shared")?)?,
        apexes,
        circuit,
    })
}

fn kind_from<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::invalid(format!("step kind: {e}")))
}

pub fn mmp_step_to_json(s: &MmpStep) -> Value {
    json!({
        "kind": s.kind,
        "wall": wall_to_json(&s.wall),
        "defect": rat_to_json(&s.defect),
        "removed_ray": s.removed_ray.as_ref().map(|r| vec_to_json(r)),
        "center": vecs_to_json(&s.center),
    })
}

pub fn mmp_step_from_json(v: &Value) -> Result<MmpStep> {
    let kind: MmpStepKind = kind_from(field(v, "kind")?)?;
    let removed_ray = match v.get("removed_ray") {
        None | Some(Value::Null) => None,
        Some(r) => Some(vec_from_json(r)?),
    };
    Ok(MmpStep {
        kind,
        wall: wall_from_json(field(v, "wall")?)?,
        defect: rat_from_json(field(v, "defect")?)?,
        removed_ray,
        center: vecs_from_json(field(v, "center")?)?,
    })
}

pub fn flop_step_to_json(s: &FlopStep) -> Value {
    json!({
        "wall": wall_to_json(&s.wall),
        "event_time": rat_to_json(&s.event_time),
        "k_defect_check": rat_to_json(&s.k_defect_check),
    })
}

pub fn flop_step_from_json(v: &Value) -> Result<FlopStep> {
    Ok(FlopStep {
        wall: wall_from_json(field(v, "wall")?)?,
        event_time: rat_from_json(field(v, "event_time")?)?,
        k_defect_check: rat_from_json(field(v, "k_defect_check")?)?,
    })
}

pub fn extraction_to_json(s: &ExtractionStep) -> Value {
    json!({"ray": vec_to_json(&s.ray), "psi_before": rat_to_json(&s.psi_before)})
}

pub fn extraction_from_json(v: &Value) -> Result<ExtractionStep> {
    Ok(ExtractionStep {
        ray: vec_from_json(field(v, "ray")?)?,
        psi_before: rat_from_json(field(v, "psi_before")?)?,
    })
}

pub fn list_to_json<T>(items: &[T], f: impl Fn(&T) -> Value) -> Value {
    Value::Array(items.iter().map(f).collect())
}

pub fn list_from_json<T>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    array(v, "a list")?.iter().map(f).collect()
}

fn ledger_to_json(e: &LedgerEntry) -> Value {
    json!({
        "kind": e.kind,
        "center": vecs_to_json(&e.center),
        "rank_delta": int_to_json(&e.rank_delta),
        "components": e.components,
        "predicted_delta": e.predicted_delta.as_ref().map(int_to_json),
    })
}

fn ledger_from_json(v: &Value) -> Result<LedgerEntry> {
    let kind: LedgerKind = kind_from(field(v, "kind")?)?;
    let components = match v.get("components") {
        None | Some(Value::Null) => None,
        Some(c) => {
            Some(serde_json::from_value(c.clone()).map_err(|e| Error::invalid(e.to_string()))?)
        }
    };
    let predicted_delta = match v.get("predicted_delta") {
        None | Some(Value::Null) => None,
        Some(d) => Some(int_from_json(d)?),
    };
    Ok(LedgerEntry {
        kind,
        center: vecs_from_json(field(v, "center")?)?,
        rank_delta: int_from_json(field(v, "rank_delta")?)?,
        components,
        predicted_delta,
    })
}

fn checks_to_json(c: &RankChecks) -> Value {
    json!({
        "order": int_to_json(&c.order),
        "rank_x": int_to_json(&c.rank_x),
        "rank_y": int_to_json(&c.rank_y),
        "ledger_total": int_to_json(&c.ledger_total),
        "rank_x_is_order": c.rank_x_is_order,
        "telescopes": c.telescopes,
        "deltas_nonnegative": c.deltas_nonnegative,
        "case_a_matches": c.case_a_matches,
        "sl": c.sl,
        "crepant_extractions": c.crepant_extractions,
        "mmp_steps": c.mmp_steps,
        "all_pass": c.all_pass(),
    })
}

fn checks_from_json(v: &Value) -> Result<RankChecks> {
    let flag = |k: &str| field(v, k)?.as_bool().ok_or_else(|| bad("a boolean", v));
    Ok(RankChecks {
        order: int_from_json(field(v, "order")?)?,
        rank_x: int_from_json(field(v, "rank_x")?)?,
        rank_y: int_from_json(field(v, "rank_y")?)?,
        ledger_total: int_from_json(field(v, "ledger_total")?)?,
        rank_x_is_order: flag("rank_x_is_order")?,
        telescopes: flag("telescopes")?,
        deltas_nonnegative: flag("deltas_nonnegative")?,
        case_a_matches: flag("case_a_matches")?,
        sl: flag("sl")?,
        crepant_extractions: flag("crepant_extractions")?,
        mmp_steps: field(v, "mmp_steps")?
            .as_u64()
            .ok_or_else(|| bad("a count", v))? as usize,
    })
}

pub fn report_to_json(r: &McKayReport) -> Value {
    let mut m = Map::new();
    m.insert("group".into(), group_to_json(&r.group));
    m.insert("x".into(), pair_to_json(&r.x));
    m.insert(
        "extractions".into(),
        list_to_json(&r.extractions, extraction_to_json),
    );
    m.insert("terminal".into(), pair_to_json(&r.terminal));
    m.insert(
        "drops".into(),
        list_to_json(
            &r.drops,
            |d| json!({"ray": vec_to_json(&d.ray), "from": rat_to_json(&d.from)}),
        ),
    );
    m.insert(
        "mmp_steps".into(),
        list_to_json(&r.mmp_steps, mmp_step_to_json),
    );
    m.insert("y".into(), pair_to_json(&r.y));
    m.insert("ledger".into(), list_to_json(&r.ledger, ledger_to_json));
    m.insert("checks".into(), checks_to_json(&r.checks));
    Value::Object(m)
}

pub fn report_from_json(v: &Value) -> Result<McKayReport> {
    Ok(McKayReport {
        group: group_from_json(field(v, "group")?)?,
        x: pair_from_json(field(v, "x")?)?,
        extractions: list_from_json(field(v, "extractions")?, extraction_from_json)?,
        terminal: pair_from_json(field(v, "terminal")?)?,
        drops: list_from_json(field(v, "drops")?, |d| {
            Ok(CoefficientDrop {
                ray: vec_from_json(field(d, "ray")?)?,
                from: rat_from_json(field(d, "from")?)?,
            })
        })?,
        mmp_steps: list_from_json(field(v, "mmp_steps")?, mmp_step_from_json)?,
        y: pair_from_json(field(v, "y")?)?,
        ledger: list_from_json(field(v, "ledger")?, ledger_from_json)?,
        checks: checks_from_json(field(v, "checks")?)?,
    })
}

/// Rebuild the final pair of a report from its starting pair and step lists.
pub fn replay_report(r: &McKayReport) -> Result<ToricPair> {
    let mut cur = crate::mmp::replay_extractions(&r.x, &r.extractions)?;
    for d in &r.drops {
        let i = cur
            .fan
            .ray_index(&d.ray)
            .ok_or_else(|| Error::invalid("dropped ray is not in the fan"))?;
        cur.coeffs[i] = Rat::from_integer(Int::from(0));
    }
    crate::mmp::replay_mmp(&cur, &r.mmp_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mckay::mckay_pipeline;
    use crate::num::{int, ivec, rat};

    #[test]
    fn integers_switch_to_strings() {
        assert_eq!(int_to_json(&int(5)), json!(5));
        let big = Int::from(1i64 << 53);
        assert_eq!(int_to_json(&big), json!("9007199254740992"));
        assert_eq!(int_to_json(&-big.clone()), json!("-9007199254740992"));
        assert_eq!(int_from_json(&json!("9007199254740992")).unwrap(), big);
        assert!(int_from_json(&json!(1.5)).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(rat_to_json(&rat(2, 4)), json!("1/2"));
        assert_eq!(rat_to_json(&rat(-3, 1)), json!("-3/1"));
        assert_eq!(rat_from_json(&json!("6/4")).unwrap(), rat(3, 2));
        assert_eq!(rat_from_json(&json!(2)).unwrap(), rat(2, 1));
        assert!(rat_from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn fan_round_trip() {
        let v = json!({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[1, 0], [1, 2], [0, 2]]});
        let f = fan_from_json(&v).unwrap();
        let back = fan_from_json(&fan_to_json(&f)).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.rays()[2], ivec(&[-1, -1]));
    }

    #[test]
    fn report_round_trip_and_replay() {
        let rep = mckay_pipeline(&GroupData::cyclic(6, &[1, 2, 3]), None).unwrap();
        let v = report_to_json(&rep);
        let text = serde_json::to_string(&v).unwrap();
        let back = report_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, rep);
        let y = replay_report(&back).unwrap();
        assert_eq!(
            serde_json::to_string(&pair_to_json(&y)).unwrap(),
            serde_json::to_string(&v["y"]).unwrap()
        );
    }

    #[test]
    fn rays_follow_the_given_basis() {
        // 1/3(1,1) in the basis (1/3,1/3), (0,1)
        let v = json!({
            "dim": 2, "rays": [[3, -1], [0, 1]], "cones": [[0, 1]],
            "lattice": [["1/3", "1/3"], ["0/1", "1/1"]],
        });
        let p = pair_from_json(&v).unwrap();
        assert_eq!(
            p.lattice.to_ambient(&p.fan.rays()[0]),
            vec![rat(1, 1), rat(0, 1)]
        );
        assert_eq!(
            p.lattice.to_ambient(&p.fan.rays()[1]),
            vec![rat(0, 1), rat(1, 1)]
        );
        assert_eq!(pair_from_json(&pair_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn rejects_malformed() {
        assert!(fan_from_json(&json!({"dim": 2, "rays": [[1, 0]]})).is_err());
        assert!(group_from_json(&json!({"n": 2, "gens": [{"r": 3, "weights": [1, 3]}]})).is_err());
        assert!(pair_from_json(
            &json!({"dim": 1, "rays": [[1]], "cones": [[0]], "coeffs": ["1/1"]})
        )
        .is_err());
    }
}
