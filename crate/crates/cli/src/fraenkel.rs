use std::path::Path;

use serde_json::json;

use henkin::fraenkel::{
    check_choice_instance_sigma0, symbolic_evaluate_with, wellorder_counterexample_sweep_with,
    Binding, BindingDoc, ChoiceOutcome, EvalCaps,
};
use henkin::schemas::OrderKind;
use henkin::syntax::print;

use crate::commands::{read_formula, read_payload};
use crate::report::{CliError, Finished, Outcome, Run};
use crate::{Caps, FormulaArg, FraenkelCommand, PayloadArg};

pub fn run(cmd: FraenkelCommand, caps: &Caps, timing: bool) -> i32 {
    match cmd {
        FraenkelCommand::Sweep { max_support, order } => {
            sweep(max_support, order.into(), caps, timing)
        }
        FraenkelCommand::Eval {
            formula,
            bind,
            strat,
        } => eval(&formula, bind.as_deref(), strat, caps, timing),
        FraenkelCommand::Choice {
            n,
            m,
            payload,
            strat,
        } => choice(n, m, &payload, strat, caps, timing),
    }
}

fn eval_caps(caps: &Caps) -> EvalCaps {
    EvalCaps {
        max_predicates: caps.cap_predicates,
        max_types: caps.cap_types,
        ..EvalCaps::default()
    }
}

fn sweep(max_support: usize, order: OrderKind, caps: &Caps, timing: bool) -> i32 {
    let mut run = Run::new("fraenkel sweep", timing);
    run.inputs.param("max_support", max_support);
    run.inputs.param("order", format!("{order:?}"));
    let result = (|| {
        let report = wellorder_counterexample_sweep_with(max_support, order, caps.cap_sweep)?;
        let found = report.total_linear_orders;
        Ok(Finished {
            outcome: if found == 0 && report.all_failures_witnessed {
                Outcome::True
            } else {
                Outcome::False
            },
            summary: format!(
                "{found} linear orders found among {} predicates with support at most {max_support}",
                report.total_predicates
            ),
            body: json!({ "sweep": report }),
        })
    })();
    run.finish(result)
}

fn eval(formula: &FormulaArg, bind: Option<&Path>, strat: usize, caps: &Caps, timing: bool) -> i32 {
    let mut run = Run::new("fraenkel eval", timing);
    let result = (|| {
        let f = read_formula(&mut run.inputs, formula)?;
        run.inputs.param("strat", strat);
        let binding = match bind {
            Some(path) => {
                let text = run.inputs.read("bind", path)?;
                let doc: BindingDoc = serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("malformed binding: {e}")))?;
                Binding::from_doc(&doc)?
            }
            None => Binding::new(),
        };
        let v = symbolic_evaluate_with(&f, &binding, strat, eval_caps(caps))?;
        let label = if v.stratified {
            format!(" at stratum {strat}")
        } else {
            String::new()
        };
        Ok(Finished {
            outcome: if v.value {
                Outcome::True
            } else {
                Outcome::False
            },
            summary: format!("{}{label}", v.value),
            body: json!({
                "formula": print(&f),
                "binding": binding.to_doc(),
                "value": v.value,
                "stratified": v.stratified,
                "stratum": v.stratum,
                "enumerated": v.enumerated,
            }),
        })
    })();
    run.finish(result)
}

fn choice(n: u32, m: u32, payload: &PayloadArg, strat: usize, caps: &Caps, timing: bool) -> i32 {
    let mut run = Run::new("fraenkel choice", timing);
    let result = (|| {
        run.inputs.param("n", n);
        run.inputs.param("m", m);
        run.inputs.param("strat", strat);
        let h = read_payload(&mut run.inputs, payload)?
            .ok_or_else(|| CliError::Input("choice needs --h or --h-expr".into()))?;
        let report = check_choice_instance_sigma0(n, m, &h, strat, eval_caps(caps))?;
        let summary = match &report.outcome {
            ChoiceOutcome::Vacuous => format!("vacuous: the antecedent fails at stratum {strat}"),
            ChoiceOutcome::Witness { support_size, .. } => {
                format!("witness with support of size {support_size} at stratum {strat}")
            }
            ChoiceOutcome::Inconclusive { searched, .. } => format!(
                "inconclusive after {searched} candidates at stratum {strat} (not a refutation)"
            ),
        };
        Ok(Finished {
            outcome: if report.verified() {
                Outcome::True
            } else {
                Outcome::False
            },
            summary,
            body: json!({ "choice": report }),
        })
    })();
    run.finish(result)
}
