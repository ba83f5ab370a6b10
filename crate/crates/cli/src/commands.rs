use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use henkin::corpus::{corpus as generate, CorpusOptions};
use henkin::model::{
    att, evaluate, saturate as saturate_structure, Assignment, AssignmentDoc, ParameterPolicy,
    PredicateStructure, SaturationCaps, StructureDoc,
};
use henkin::schemas::{build, check_schema, wo, Family, OrderKind, SchemaId, Verdict};
use henkin::symmetry::{build_permutation_model, FilterDoc, FilterSpec, GroupDoc};
use henkin::syntax::{derivation, parse as parse_formula, print, pv, x, Formula, Quantifier};

use crate::report::{CliError, Finished, Inputs, Outcome, Run};
use crate::{Caps, FormulaArg, PayloadArg};

pub fn read_formula(inputs: &mut Inputs, arg: &FormulaArg) -> Result<Formula, CliError> {
    let text = match (&arg.formula, &arg.expr) {
        (Some(path), _) => inputs.read("formula", path)?,
        (None, Some(e)) => {
            inputs.param("formula", e);
            e.clone()
        }
        (None, None) => return Err(CliError::Input("no formula given".into())),
    };
    checked(&text)
}

pub fn read_payload(inputs: &mut Inputs, arg: &PayloadArg) -> Result<Option<Formula>, CliError> {
    let text = match (&arg.h, &arg.h_expr) {
        (Some(path), _) => inputs.read("h", path)?,
        (None, Some(e)) => {
            inputs.param("h", e);
            e.clone()
        }
        (None, None) => return Ok(None),
    };
    checked(&text).map(Some)
}

fn checked(text: &str) -> Result<Formula, CliError> {
    let f = parse_formula(text.trim()).map_err(|e| CliError::Input(format!("parse error: {e}")))?;
    derivation(&f).map_err(|e| CliError::Input(format!("not well formed: {e}")))?;
    Ok(f)
}

/// The structure part of a structure file plus the raw document, which may
/// also describe a group and a filter.
fn read_structure(
    inputs: &mut Inputs,
    path: &Path,
    caps: &Caps,
) -> Result<(PredicateStructure, Value), CliError> {
    let text = inputs.read("structure", path)?;
    let raw: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed structure file: {e}")))?;
    let doc = StructureDoc::deserialize(&raw)
        .map_err(|e| CliError::Input(format!("malformed structure file: {e}")))?;
    if doc.individuals.len() > caps.cap_individuals {
        return Err(CliError::Cap(format!(
            "{} individuals exceed the cap of {}",
            doc.individuals.len(),
            caps.cap_individuals
        )));
    }
    if let Some((n, d)) = doc.domains.iter().find(|(_, d)| d.len() > caps.cap_tables) {
        return Err(CliError::Cap(format!(
            "J{n} holds {} tables, over the cap of {}",
            d.len(),
            caps.cap_tables
        )));
    }
    Ok((PredicateStructure::from_doc(&doc)?, raw))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serialisable");
    fs::write(path, text + "\n")
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn domain_sizes(s: &PredicateStructure) -> Value {
    s.domains()
        .iter()
        .map(|(n, d)| (n.to_string(), json!(d.len())))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

pub fn parse(arg: &FormulaArg, timing: bool) -> i32 {
    let mut run = Run::new("parse", timing);
    let result = (|| {
        let f = read_formula(&mut run.inputs, arg)?;
        let printed = print(&f);
        let free: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
        Ok(Finished {
            outcome: Outcome::True,
            summary: printed.clone(),
            body: json!({
                "formula": printed,
                "depth": f.depth(),
                "size": f.size(),
                "free_vars": free,
                "well_formed": true,
            }),
        })
    })();
    run.finish(result)
}

pub fn eval(
    structure: &Path,
    arg: &FormulaArg,
    assignment: Option<&Path>,
    caps: &Caps,
    timing: bool,
) -> i32 {
    let mut run = Run::new("eval", timing);
    let result = (|| {
        let (s, _) = read_structure(&mut run.inputs, structure, caps)?;
        let f = read_formula(&mut run.inputs, arg)?;
        let a = match assignment {
            Some(path) => {
                let text = run.inputs.read("assignment", path)?;
                let doc: AssignmentDoc = serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("malformed assignment: {e}")))?;
                Assignment::from_doc(&s, &doc)?
            }
            None => Assignment::new(),
        };
        let value = evaluate(&s, &a, &f)?;
        Ok(Finished {
            outcome: if value { Outcome::True } else { Outcome::False },
            summary: format!(
                "{} under the given assignment",
                if value { "true" } else { "false" }
            ),
            body: json!({
                "formula": print(&f),
                "assignment": a.to_doc(&s),
                "value": value,
            }),
        })
    })();
    run.finish(result)
}

/// The formula with its leading universal quantifiers removed, which is
/// what a counterexample assignment falsifies.
pub fn open_matrix(f: &Formula) -> &Formula {
    let mut cur = f;
    while let Formula::Quant(Quantifier::All, _, body) = cur {
        cur = body;
    }
    cur
}

#[allow(clippy::too_many_arguments)]
pub fn check(
    structure: &Path,
    family: Family,
    n: u32,
    m: u32,
    payload: &PayloadArg,
    order: OrderKind,
    caps: &Caps,
    timing: bool,
) -> i32 {
    let mut run = Run::new("check", timing);
    let result = (|| {
        let (s, _) = read_structure(&mut run.inputs, structure, caps)?;
        run.inputs.param("schema", family);
        run.inputs.param("n", n);
        run.inputs.param("m", m);
        run.inputs.param("order", format!("{order:?}"));
        let h = read_payload(&mut run.inputs, payload)?;
        if h.is_some() && !family.has_payload() {
            return Err(CliError::Input(format!("schema {family} takes no payload")));
        }
        let need = |h: Option<Formula>| {
            h.ok_or_else(|| CliError::Input(format!("schema {family} needs --h or --h-expr")))
        };
        let id = match family {
            Family::Choice => SchemaId::choice(n, m, need(h)?),
            Family::ChoiceH => SchemaId::choice_h(n, m, need(h)?),
            Family::Ac => SchemaId::ac(n, m),
            Family::AcStar => SchemaId::ac_star(n, m),
            Family::ChoiceStar => SchemaId::choice_star(m, need(h)?),
            Family::Comprehension => SchemaId::comprehension(n, need(h)?),
            Family::Wo1 => SchemaId::wo1(),
            Family::Lo => SchemaId::lo(),
            Family::Wo => SchemaId::wo(),
        }
        .with_order(order);
        let formula = build(&id)?;
        let verdict = check_schema(&s, &id)?;
        let mut body = json!({
            "schema": family,
            "n": n,
            "m": m,
            "order": order,
            "formula": print(&formula),
            "holds": verdict.holds(),
        });
        if let Verdict::Counterexample(a) = &verdict {
            body["counterexample"] = json!(a.to_doc(&s));
            body["replay"] = json!({
                "formula": print(open_matrix(&formula)),
                "assignment": a.to_doc(&s),
                "value": false,
            });
            if let Family::Comprehension = family {
                let xs: Vec<_> = (1..=n).map(x).collect();
                let defined = att(&s, id.payload.as_ref().expect("payload"), &xs, a)?;
                body["missing_table"] = json!(defined.table.to_bitstring());
            }
        }
        if family == Family::Wo1 {
            let orders = match s.domain(2) {
                Some(d) => d
                    .iter()
                    .filter_map(|t| {
                        let a = Assignment::new().with_pred(pv(1, 2), t.clone());
                        match evaluate(&s, &a, &wo(order)) {
                            Ok(true) => Some(Ok(t.to_bitstring())),
                            Ok(false) => None,
                            Err(e) => Some(Err(e)),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            body["well_orders_in_domain"] = json!(orders);
        }
        let holds = verdict.holds();
        Ok(Finished {
            outcome: if holds { Outcome::True } else { Outcome::False },
            summary: format!("{family} {}", if holds { "holds" } else { "fails" }),
            body,
        })
    })();
    run.finish(result)
}

pub fn saturate(
    structure: &Path,
    depth: usize,
    policy: ParameterPolicy,
    out: Option<&Path>,
    caps: &Caps,
    timing: bool,
) -> i32 {
    let mut run = Run::new("saturate", timing);
    let result = (|| {
        let (s, _) = read_structure(&mut run.inputs, structure, caps)?;
        run.inputs.param("depth", depth);
        run.inputs.param("policy", format!("{policy:?}"));
        let sat_caps = SaturationCaps {
            max_tables: caps.cap_tables,
            ..SaturationCaps::default()
        };
        let sat = saturate_structure(&s, depth, policy, sat_caps)?;
        let doc = sat.structure.to_doc();
        if let Some(path) = out {
            write_json(path, &doc)?;
        }
        let added: usize = sat.added.values().sum();
        Ok(Finished {
            outcome: Outcome::True,
            summary: format!("added {added} tables in {} rounds", sat.rounds),
            body: json!({
                "depth": sat.depth,
                "rounds": sat.rounds,
                "policy": sat.policy,
                "added": sat.added,
                "domain_sizes": domain_sizes(&sat.structure),
                "structure": doc,
            }),
        })
    })();
    run.finish(result)
}

pub fn build_model(
    structure: &Path,
    max_arity: u32,
    out: Option<&Path>,
    caps: &Caps,
    timing: bool,
) -> i32 {
    let mut run = Run::new("build-model", timing);
    let result = (|| {
        let text = run.inputs.read("structure", structure)?;
        run.inputs.param("max_arity", max_arity);
        #[derive(Deserialize)]
        struct ModelDoc {
            individuals: Vec<String>,
            group: GroupDoc,
            #[serde(default)]
            filter: Option<FilterDoc>,
        }
        let doc: ModelDoc = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("malformed model description: {e}")))?;
        if doc.individuals.len() > caps.cap_individuals {
            return Err(CliError::Cap(format!(
                "{} individuals exceed the cap of {}",
                doc.individuals.len(),
                caps.cap_individuals
            )));
        }
        let group = doc.group.resolve(&doc.individuals, caps.cap_group_order)?;
        let spec = match &doc.filter {
            Some(f) => f.resolve(&doc.individuals, caps.cap_group_order)?,
            None => FilterSpec::FiniteSupports,
        };
        let model = build_permutation_model(
            doc.individuals.clone(),
            group,
            &spec,
            max_arity,
            caps.cap_tables,
        )?;
        let sdoc = model.structure.to_doc();
        let mut out_doc = serde_json::to_value(&sdoc).expect("serialisable");
        out_doc["group"] = json!(doc.group);
        if let Some(f) = &doc.filter {
            out_doc["filter"] = json!(f);
        }
        if let Some(path) = out {
            write_json(path, &out_doc)?;
        }
        let sizes = domain_sizes(&model.structure);
        Ok(Finished {
            outcome: Outcome::True,
            summary: format!(
                "group of order {}, domain sizes {sizes}",
                model.group.order()
            ),
            body: json!({
                "group_order": model.group.order(),
                "filter": model.filter.kind(),
                "filter_core_order": model.filter.core().order(),
                "filter_degenerate": model.filter.is_degenerate(),
                "standard": model.structure.is_standard(),
                "domain_sizes": sizes,
                "structure": out_doc,
            }),
        })
    })();
    run.finish(result)
}

pub fn corpus(depth: usize, seed: u64, count: usize, timing: bool) -> i32 {
    let mut run = Run::new("corpus", timing);
    run.inputs.param("depth", depth);
    run.inputs.param("seed", seed);
    run.inputs.param("count", count);
    let opts = CorpusOptions {
        max_depth: depth,
        ..CorpusOptions::default()
    };
    let formulas: Vec<String> = generate(&opts, seed, count).iter().map(print).collect();
    let result = Ok(Finished {
        outcome: Outcome::True,
        summary: format!("{} formulas of depth at most {depth}", formulas.len()),
        body: json!({ "depth": depth, "seed": seed, "formulas": formulas }),
    });
    run.finish(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_strips_leading_universals_only() {
        let f = parse_formula("all x1 . all A1^1 . ex x2 . all x3 . x1 = x3").unwrap();
        assert_eq!(print(open_matrix(&f)), "ex x2 . all x3 . x1 = x3");
    }
}
