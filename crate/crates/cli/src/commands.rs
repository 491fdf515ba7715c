use std::io::Write;

use poset_cde::cde::{
    bottom_top_balance, cde_report, certify_tcde_with, find_witness_with, scan_family, Predicate,
    ScanRecord,
};
use poset_cde::distributions::{expectation, mchain_dist, mmchain_dist, rank_dist, Distribution};
use poset_cde::dynamics::{
    antichain_cardinality, asymmetric_orbits, homomesy_report, orbit_decomposition, parse_map,
};
use poset_cde::lattice::DEFAULT_BUDGET;
use poset_cde::minuscule::{verify_minuscule_theorems, MinusculeCase};
use poset_cde::rational::{fmt_q, parse_q};
use poset_cde::tableaux::{
    list_barely, shape_name, shifted_counts, skew_counts, skew_shapes_of_size, ORDINARY_BUDGET,
    SHIFTED_BUDGET,
};
use poset_cde::{
    classify_shifted_balanced, Error, IdealLattice, Partition, Poset, Result, ShapeLiteral,
    ShiftedClass, ShiftedShape, SkewShape, Statistic, TcdeCertificate, TcdeWitness, Q,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::Input;
use crate::{Format, Opts, PredicateArg};

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        _ => 2,
    }
}

fn input(o: &Opts) -> Result<Input> {
    let given = [o.poset.is_some(), o.shape.is_some(), o.family.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::Parse(
            "give exactly one of --poset, --shape, --family".to_string(),
        ));
    }
    if let Some(path) = &o.poset {
        Input::from_file(path)
    } else if let Some(lit) = &o.shape {
        Input::from_shape(lit)
    } else {
        Input::from_family(o.family.as_deref().unwrap())
    }
}

fn budget(o: &Opts) -> usize {
    o.budget.unwrap_or(DEFAULT_BUDGET)
}

fn lattice(o: &Opts, inp: &Input) -> Result<IdealLattice> {
    IdealLattice::with_budget(&inp.poset, budget(o))
}

fn emit(o: &Opts, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    write_out(o, &text)
}

fn write_out(o: &Opts, text: &str) -> Result<()> {
    match &o.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn require_json(o: &Opts) -> Result<()> {
    if o.format != Format::Json {
        return Err(Error::Parse(
            "csv output is only available for scan".to_string(),
        ));
    }
    Ok(())
}

fn ideal_names(inp: &Input, l: &IdealLattice, ids: &[usize]) -> Vec<String> {
    ids.iter()
        .map(|&i| inp.describe(&l.ideal(i).members()))
        .collect()
}

fn extras(o: &Opts, l: &IdealLattice) -> (Vec<Statistic>, Vec<&'static str>) {
    if o.balance_ends {
        (vec![bottom_top_balance(l)], vec!["bottom_top_balance"])
    } else {
        (Vec::new(), Vec::new())
    }
}

pub fn analyze(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let inp = input(o)?;
    let on_lattice = o.lattice || o.poset.is_none();
    let lat = if on_lattice {
        Some(lattice(o, &inp)?)
    } else {
        None
    };
    let target: &Poset = lat.as_ref().map_or(&inp.poset, |l| l.as_poset());
    let report = cde_report(target)?;
    let mut value = json!({
        "input": inp.name,
        "analyzed": if on_lattice { "J(P)" } else { "P" },
        "elements": target.len(),
        "report": report,
    });
    if let Some(m) = o.m {
        let ddeg = poset_cde::distributions::ddeg_statistic(target);
        value["mchain_expectation"] = json!(fmt_q(&expectation(&mchain_dist(target, m)?, &ddeg)?));
        value["mmchain_expectation"] =
            json!(fmt_q(&expectation(&mmchain_dist(target, m)?, &ddeg)?));
    }
    if let Some(l) = &lat {
        if let Ok(mu) = rank_dist(l) {
            value["rank_expectation"] = json!(fmt_q(&expectation(&mu, &l.ddeg_statistic())?));
        }
    }
    emit(o, &value)?;
    Ok(0)
}

fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn certificate_value(
    inp: &Input,
    l: &IdealLattice,
    cert: &TcdeCertificate,
    names: &[&str],
) -> Value {
    let labels: Vec<String> = (0..inp.poset.len()).map(|p| inp.poset.label(p)).collect();
    json!({
        "input": inp.name,
        "ideals": l.len(),
        "certified": true,
        "certificate": cert,
        "extra_statistics": names,
        "labels": labels,
    })
}

fn witness_value(inp: &Input, l: &IdealLattice, w: &TcdeWitness, names: &[&str]) -> Value {
    let support: Vec<Value> =
        w.mu.weights
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != Q::from_integer(0.into()))
            .map(|(i, x)| json!({"ideal": inp.describe(&l.ideal(i).members()), "weight": fmt_q(x)}))
            .collect();
    json!({
        "input": inp.name,
        "ideals": l.len(),
        "certified": false,
        "edge_density": fmt_q(&poset_cde::distributions::edge_density(l.as_poset())),
        "witness": w,
        "extra_statistics": names,
        "support": support,
    })
}

pub fn cert_tcde(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let inp = input(o)?;
    let l = lattice(o, &inp)?;
    if let Some(path) = &o.check {
        let file = read_json(path)?;
        let cert: TcdeCertificate = serde_json::from_value(file["certificate"].clone())
            .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
        let uses_balance = file["extra_statistics"]
            .as_array()
            .is_some_and(|a| a.iter().any(|x| x == "bottom_top_balance"));
        let extra = if uses_balance {
            vec![bottom_top_balance(&l)]
        } else {
            Vec::new()
        };
        let failure = cert.first_failure(&l, &extra);
        emit(
            o,
            &json!({
                "input": inp.name,
                "valid": failure.is_none(),
                "first_failure": failure.map(|i| inp.describe(&l.ideal(i).members())),
            }),
        )?;
        return Ok(if failure.is_none() { 0 } else { 1 });
    }
    let (extra, names) = extras(o, &l);
    match certify_tcde_with(&l, &extra) {
        Some(cert) => {
            emit(o, &certificate_value(&inp, &l, &cert, &names))?;
            Ok(0)
        }
        None => {
            let w = find_witness_with(&l, &extra)
                .ok_or_else(|| Error::Internal("neither certificate nor witness".into()))?;
            emit(o, &witness_value(&inp, &l, &w, &names))?;
            Ok(1)
        }
    }
}

pub fn witness(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let inp = input(o)?;
    let l = lattice(o, &inp)?;
    if let Some(path) = &o.check {
        let file = read_json(path)?;
        let w = parse_witness(&inp, &l, &file)?;
        let valid = w.validate(&l);
        emit(o, &json!({"input": inp.name, "valid": valid}))?;
        return Ok(if valid { 0 } else { 1 });
    }
    let (extra, names) = extras(o, &l);
    match find_witness_with(&l, &extra) {
        Some(w) => {
            emit(o, &witness_value(&inp, &l, &w, &names))?;
            Ok(0)
        }
        None => {
            let cert = certify_tcde_with(&l, &extra)
                .ok_or_else(|| Error::Internal("neither certificate nor witness".into()))?;
            emit(o, &certificate_value(&inp, &l, &cert, &names))?;
            Ok(1)
        }
    }
}

/// Accepts an emitted witness, or a table `{"weights": [{"ideal": .., "weight": ..}],
/// "expectation": ..}` naming ideals as the reports print them.
fn parse_witness(inp: &Input, l: &IdealLattice, file: &Value) -> Result<TcdeWitness> {
    if let Some(node) = file.get("witness") {
        return serde_json::from_value(node.clone())
            .map_err(|e| Error::Parse(format!("witness: {e}")));
    }
    let rows = file["weights"]
        .as_array()
        .ok_or_else(|| Error::Parse("witness file needs \"witness\" or \"weights\"".into()))?;
    let names = ideal_names(inp, l, &(0..l.len()).collect::<Vec<_>>());
    let mut weights = vec![Q::from_integer(0.into()); l.len()];
    for row in rows {
        let ideal = row["ideal"].as_str().unwrap_or_default();
        let ideal = if ideal.is_empty() { "∅" } else { ideal };
        let i = names
            .iter()
            .position(|n| n == ideal)
            .ok_or_else(|| Error::Parse(format!("{ideal:?} is not an ideal")))?;
        weights[i] = parse_q(row["weight"].as_str().unwrap_or_default())?;
    }
    let expectation = parse_q(file["expectation"].as_str().unwrap_or_default())?;
    Ok(TcdeWitness {
        mu: Distribution::new(weights)?,
        expectation,
    })
}

pub fn orbits(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let inp = input(o)?;
    let l = lattice(o, &inp)?;
    let map = parse_map(&l, &o.map)?;
    let dec = orbit_decomposition(&map);
    let orbits: Vec<Vec<String>> = dec
        .orbits
        .iter()
        .map(|orb| ideal_names(&inp, &l, orb))
        .collect();
    emit(
        o,
        &json!({
            "input": inp.name,
            "map": o.map,
            "ideals": l.len(),
            "order": dec.order(),
            "orbit_sizes": dec.sizes(),
            "orbits": orbits,
        }),
    )?;
    Ok(0)
}

fn statistic(o: &Opts, inp: &Input, l: &IdealLattice) -> Result<Statistic> {
    if o.stat == "antichain" || o.stat == "ddeg" {
        return Ok(antichain_cardinality(l));
    }
    if let Some(p) = o.stat.strip_prefix("toggle:") {
        let p = (0..inp.poset.len())
            .find(|&q| inp.poset.label(q) == p)
            .ok_or_else(|| Error::Parse(format!("no element {p:?}")))?;
        return Ok(l.signed_toggleability(p));
    }
    Err(Error::Parse(format!("unknown statistic {:?}", o.stat)))
}

pub fn homomesy(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let inp = input(o)?;
    let l = lattice(o, &inp)?;
    let map = parse_map(&l, &o.map)?;
    let dec = orbit_decomposition(&map);
    let stat = statistic(o, &inp, &l)?;
    let report = homomesy_report(&dec, &stat);
    let asym = asymmetric_orbits(&l, &dec);
    let homomesic = report.homomesic;
    emit(
        o,
        &json!({
            "input": inp.name,
            "map": o.map,
            "statistic": o.stat,
            "homomesic": report.homomesic,
            "constant": report.constant.as_ref().map(fmt_q),
            "report": report,
            "asymmetric_orbits": asym.iter().map(|orb| ideal_names(&inp, &l, orb)).collect::<Vec<_>>(),
        }),
    )?;
    Ok(if homomesic { 0 } else { 1 })
}

pub fn count_tableaux(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let lit = o
        .shape
        .as_deref()
        .ok_or_else(|| Error::Parse("count-tableaux needs --shape".into()))?;
    let shape: ShapeLiteral = lit.parse()?;
    let mut value = match &shape {
        ShapeLiteral::Skew(s) => {
            let counts = skew_counts(s, o.enum_budget.unwrap_or(ORDINARY_BUDGET))?;
            json!({ "counts": counts })
        }
        ShapeLiteral::Shifted(s) => {
            let counts = shifted_counts(s.lambda(), o.enum_budget.unwrap_or(SHIFTED_BUDGET))?;
            json!({ "counts": counts })
        }
    };
    let counts = &value["counts"];
    let agree = |f: &str, e: &str| counts[e].is_null() || counts[f] == counts[e];
    let consistent = agree("barely_formula", "barely_enumerated")
        && agree(
            "diagonally_unprimed_formula",
            "diagonally_unprimed_enumerated",
        );
    value["consistent"] = json!(consistent);
    if o.fillings {
        let ShapeLiteral::Skew(s) = &shape else {
            return Err(Error::Parse(
                "--fillings is only available for straight and skew shapes".into(),
            ));
        };
        value["fillings"] = json!(list_barely(s, 5)?);
    }
    emit(o, &value)?;
    Ok(if consistent { 0 } else { 1 })
}

#[derive(Serialize)]
struct ScanRow {
    name: String,
    ideals: usize,
    edge_density: Option<String>,
    maxchain_expectation: Option<String>,
    holds: Option<bool>,
    predicted: bool,
    tcde_constant: Option<String>,
    error: Option<String>,
}

type ScanInputs = (Vec<(String, Poset)>, Vec<bool>, bool);

/// Members of a scan family with the predicate value the theory predicts, and whether
/// that prediction is claimed to be exact (so a positive result off-prediction counts).
fn scan_inputs(family: &str, k: usize) -> Result<ScanInputs> {
    let mut inputs = Vec::new();
    let mut predicted = Vec::new();
    let exact = match family {
        "straight" => {
            for lambda in (1..=k).flat_map(Partition::all_of) {
                let s = SkewShape::straight(&lambda);
                predicted.push(s.is_balanced()?);
                inputs.push((format!("straight:{lambda}"), s.poset()));
            }
            true
        }
        "strict" => {
            for lambda in (1..=k).flat_map(Partition::all_strict_of) {
                predicted.push(classify_shifted_balanced(&lambda) != ShiftedClass::None);
                inputs.push((
                    format!("shifted:{lambda}"),
                    ShiftedShape::new(&lambda)?.poset(),
                ));
            }
            true
        }
        "skew" => {
            for s in (1..=k)
                .flat_map(skew_shapes_of_size)
                .filter(SkewShape::is_connected)
            {
                predicted.push(s.is_balanced()?);
                inputs.push((shape_name(&s), s.poset()));
            }
            false
        }
        "minuscule" => {
            for case in MinusculeCase::all_up_to(k) {
                predicted.push(true);
                inputs.push((format!("minuscule:{case}"), case.build()?));
            }
            false
        }
        other => return Err(Error::Parse(format!("unknown scan family {other:?}"))),
    };
    Ok((inputs, predicted, exact))
}

pub fn scan(o: &Opts) -> Result<u8> {
    let family = o
        .family
        .as_deref()
        .ok_or_else(|| Error::Parse("scan needs --family".into()))?;
    let (inputs, predicted, exact) = scan_inputs(family, o.k.unwrap_or(8))?;
    let predicate = match o.predicate {
        PredicateArg::Cde => Predicate::Cde,
        PredicateArg::Mcde => Predicate::Mcde,
        PredicateArg::Tcde => Predicate::Tcde,
    };
    let records: Vec<ScanRecord> = scan_family(inputs, predicate, budget(o));
    if records.iter().any(|r| r.error.is_some()) {
        let over = records.iter().find_map(|r| r.error.clone()).unwrap();
        eprintln!("warning: some inputs were skipped: {over}");
    }
    let rows: Vec<ScanRow> = records
        .iter()
        .zip(&predicted)
        .map(|(r, &p)| ScanRow {
            name: r.name.clone(),
            ideals: r.ideals,
            edge_density: r.report.as_ref().map(|x| fmt_q(&x.edge_density)),
            maxchain_expectation: r.report.as_ref().map(|x| fmt_q(&x.maxchain_expectation)),
            holds: r.holds,
            predicted: p,
            tcde_constant: r.tcde_constant.as_ref().map(fmt_q),
            error: r.error.clone(),
        })
        .collect();
    let mismatches: Vec<&str> = rows
        .iter()
        .filter(|r| match r.holds {
            Some(h) => (r.predicted && !h) || (exact && h && !r.predicted),
            None => false,
        })
        .map(|r| r.name.as_str())
        .collect();
    match o.format {
        Format::Json => emit(
            o,
            &json!({
                "family": family,
                "predicate": format!("{:?}", o.predicate).to_lowercase(),
                "rows": rows,
                "mismatches": mismatches,
            }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)
                    .map_err(|e| Error::Internal(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            write_out(o, &String::from_utf8(bytes).expect("csv is utf-8"))?;
        }
    }
    if rows
        .iter()
        .any(|r| r.error.as_deref().is_some_and(|e| e.contains("budget")))
    {
        return Ok(3);
    }
    Ok(if mismatches.is_empty() { 0 } else { 1 })
}

fn balanced_rows(k: usize) -> Result<Vec<Value>> {
    let mut rows = Vec::new();
    for s in (1..=k).flat_map(skew_shapes_of_size) {
        if !s.is_connected() || !s.is_balanced()? {
            continue;
        }
        let l = IdealLattice::new(&s.poset())?;
        let want = Q::new(
            (s.height() * s.width()).into(),
            (s.height() + s.width()).into(),
        );
        let c = certify_tcde_with(&l, &[]).map(|c| c.c);
        let rook = s.rook_placement().and_then(|r| s.rook_certificate(&r));
        let rook_ok = rook
            .as_ref()
            .is_ok_and(|cert| cert.verify(&l) && cert.c == want);
        rows.push(json!({
            "name": shape_name(&s),
            "predicted": fmt_q(&want),
            "certified": c.as_ref().map(fmt_q),
            "rook_certificate": rook_ok,
            "ok": c.as_ref() == Some(&want) && rook_ok,
        }));
    }
    Ok(rows)
}

fn shifted_rows(k: usize) -> Result<Vec<Value>> {
    let mut rows = Vec::new();
    for lambda in (1..=k).flat_map(Partition::all_strict_of) {
        let class = classify_shifted_balanced(&lambda);
        let Some(want) = class.predicted_density(&lambda) else {
            continue;
        };
        let shape = ShiftedShape::new(&lambda)?;
        let l = IdealLattice::new(&shape.poset())?;
        let trapezoid = matches!(class, ShiftedClass::Trapezoid { .. });
        let extra = if trapezoid {
            vec![bottom_top_balance(&l)]
        } else {
            Vec::new()
        };
        let c = certify_tcde_with(&l, &extra).map(|c| c.c);
        let rook_ok = trapezoid
            || shape
                .rook_placement()
                .and_then(|r| shape.rook_certificate(&r))
                .is_ok_and(|cert| cert.verify(&l) && cert.c == want);
        rows.push(json!({
            "name": format!("shifted:{lambda}"),
            "class": class,
            "predicted": fmt_q(&want),
            "certified": c.as_ref().map(fmt_q),
            "needs_balanced_ends": trapezoid,
            "rook_certificate": rook_ok,
            "ok": c.as_ref() == Some(&want) && rook_ok,
        }));
    }
    Ok(rows)
}

pub fn family(o: &Opts) -> Result<u8> {
    require_json(o)?;
    let name = o
        .family
        .as_deref()
        .ok_or_else(|| Error::Parse("family needs --family".into()))?;
    let k = o.k.unwrap_or(4);
    let rows: Vec<Value> = match name {
        "minuscule" => verify_minuscule_theorems(k, budget(o))
            .into_iter()
            .map(|r| {
                r.map(|rec| {
                    let ok = rec.ok();
                    let mut v = serde_json::to_value(&rec).expect("records serialize");
                    v["ok"] = json!(ok);
                    v
                })
            })
            .collect::<Result<Vec<_>>>()?,
        "balanced" => balanced_rows(k)?,
        "shifted-balanced" => shifted_rows(k)?,
        other => return Err(Error::Parse(format!("unknown family {other:?}"))),
    };
    let ok = rows.iter().all(|r| r["ok"] == json!(true));
    emit(
        o,
        &json!({"family": name, "k": k, "ok": ok, "members": rows}),
    )?;
    Ok(if ok { 0 } else { 1 })
}
