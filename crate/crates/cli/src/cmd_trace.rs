//! `agmon trace`: replay the bookkeeping that assembles the constant.
//!
//! Expands the 2^d norm terms, assigns each one a reduction target under
//! the canonical plan, sums the per-term costs, and compares the total
//! against the closed-form exponent. A MISMATCH (or any sampled plan
//! disagreeing) exits 1; that path exists to be dead.

use agmon_core::{
    expand_chain, json_u128, order_histogram, plan_count, reduction_cost, sample_plans,
    total_kappa, Branch, ConstantSpec, Json, ProofTerm, ReductionPlan, ReductionTarget,
};

use crate::emit::{pad, print_json, Format};
use crate::UsageError;

/// Past this dimension only the histograms are emitted; the full term
/// table would run to 2^d rows.
const TERM_TABLE_MAX_DIM: u32 = 14;

pub fn run(
    format: Format,
    seed: u64,
    d: u32,
    p: u128,
    plans: Option<u64>,
) -> Result<i32, UsageError> {
    let spec = ConstantSpec::new(d, p)?;
    let closed = spec.kappa_log2();
    let plan = ReductionPlan::canonical(d, p)?;
    let terms = expand_chain(d)?;
    let total = total_kappa(d, p, &plan)?;
    let matches = total == closed;

    // Every admissible plan must reach the same total; sampling re-checks
    // the plan-independence claim rather than trusting the canonical one.
    let sampled = match plans {
        Some(n) => {
            let mut agree = true;
            for sampled_plan in sample_plans(d, p, n, seed)? {
                agree &= total_kappa(d, p, &sampled_plan)? == closed;
            }
            Some((n, agree))
        }
        None => None,
    };
    let verdict_ok = matches && sampled.is_none_or(|(_, agree)| agree);

    let rows = if d <= TERM_TABLE_MAX_DIM {
        Some(term_rows(&terms, &plan))
    } else {
        None
    };
    let with_hist = order_histogram(&terms, Branch::WithAxis1);
    let without_hist = order_histogram(&terms, Branch::WithoutAxis1);

    match format {
        Format::Json => {
            let mut doc = vec![
                ("d".into(), Json::Int(d as i128)),
                ("p".into(), json_u128(p)),
                ("term_count".into(), Json::Int(terms.len() as i128)),
                ("with_d1_orders".into(), hist_json(&with_hist)),
                ("without_d1_orders".into(), hist_json(&without_hist)),
            ];
            if let Some(rows) = &rows {
                doc.push((
                    "terms".into(),
                    Json::Arr(rows.iter().map(row_json).collect()),
                ));
            }
            doc.push((
                "plan".into(),
                Json::Arr(
                    plan.chosen()
                        .iter()
                        .map(|&i| Json::Int(i as i128))
                        .collect(),
                ),
            ));
            doc.push(("total_log2".into(), Json::Str(total.to_string())));
            doc.push(("closed_form_log2".into(), Json::Str(closed.to_string())));
            doc.push((
                "plan_count".into(),
                Json::Str(plan_count(d, p)?.to_string()),
            ));
            if let Some((n, agree)) = sampled {
                doc.push(("sampled_plans".into(), json_u128(n as u128)));
                doc.push(("sampled_agree".into(), Json::Bool(agree)));
            }
            doc.push((
                "verdict".into(),
                Json::Str(if verdict_ok { "MATCH" } else { "MISMATCH" }.into()),
            ));
            print_json(&Json::Obj(doc));
        }
        Format::Table => {
            println!("expansion for d = {d}, p = {p} ({} terms)", terms.len());
            if let Some(rows) = &rows {
                println!(
                    "  {} {} {} {} {}",
                    pad("branch", 11),
                    pad("operator", 12),
                    pad("order", 5),
                    pad("target", 10),
                    pad("cost_log2", 9),
                );
                for r in rows {
                    println!(
                        "  {} {} {} {} {}",
                        pad(&r.branch, 11),
                        pad(&r.operator, 12),
                        pad(&r.order.to_string(), 5),
                        pad(r.target, 10),
                        pad(&r.cost.to_string(), 9),
                    );
                }
            } else {
                println!("  (term table omitted for d > {TERM_TABLE_MAX_DIM})");
                print_hist("with_d1", &with_hist);
                print_hist("without_d1", &without_hist);
            }
            println!(
                "total 2^({total}) vs closed form 2^({closed}): {}",
                if matches { "MATCH" } else { "MISMATCH" }
            );
            if let Some((n, agree)) = sampled {
                println!(
                    "sampled plans: {n} of {} total, {}",
                    plan_count(d, p)?,
                    if agree { "all agree" } else { "DISAGREE" }
                );
            }
        }
    }
    Ok(if verdict_ok { 0 } else { 1 })
}

struct TermRow {
    branch: String,
    operator: String,
    axes: Vec<u32>,
    order: u32,
    target: &'static str,
    cost: u32,
}

fn term_rows(terms: &[ProofTerm], plan: &ReductionPlan) -> Vec<TermRow> {
    let branch_size = terms.len() / 2;
    terms
        .iter()
        .enumerate()
        .map(|(i, term)| {
            let target = if i < branch_size && plan.chosen().contains(&i) {
                ReductionTarget::FirstDiff
            } else {
                ReductionTarget::Plain
            };
            TermRow {
                branch: term.branch().to_string(),
                operator: term.to_string(),
                axes: term.axes().axes(),
                order: term.order(),
                target: match target {
                    ReductionTarget::FirstDiff => "first_diff",
                    ReductionTarget::Plain => "plain",
                },
                cost: reduction_cost(term, target).expect("targets assigned per branch"),
            }
        })
        .collect()
}

fn row_json(r: &TermRow) -> Json {
    Json::Obj(vec![
        ("branch".into(), Json::Str(r.branch.clone())),
        ("operator".into(), Json::Str(r.operator.clone())),
        (
            "axes".into(),
            Json::Arr(r.axes.iter().map(|&a| Json::Int(a as i128)).collect()),
        ),
        ("order".into(), Json::Int(r.order as i128)),
        ("target".into(), Json::Str(r.target.into())),
        ("cost_log2".into(), Json::Int(r.cost as i128)),
    ])
}

fn hist_json(hist: &std::collections::BTreeMap<u32, u64>) -> Json {
    Json::Arr(
        hist.iter()
            .map(|(&order, &count)| {
                Json::Obj(vec![
                    ("order".into(), Json::Int(order as i128)),
                    ("count".into(), json_u128(count as u128)),
                ])
            })
            .collect(),
    )
}

fn print_hist(name: &str, hist: &std::collections::BTreeMap<u32, u64>) {
    print!("  {name}:");
    for (order, count) in hist {
        print!(" {order}:{count}");
    }
    println!();
}
