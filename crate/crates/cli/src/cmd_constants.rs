//! `agmon constants`: exact inequality constants for one dimension.
//!
//! Emits kappa and mu per requested p, the two branch products with their
//! cross-checking minimum, and the per-order term counts of the expansion.
//! Exponents are exact decimal strings; approximations are `f64`, null in
//! JSON when the true value overflows.

use agmon_core::{
    exponent_string, json_u128, kappa_min, omega_count, pure_pow2_exponent, rho1, rho2, Branch,
    ConstantSpec, ConstantValue, Json,
};

use crate::emit::{float_cell, pad, print_json, Format};
use crate::UsageError;

/// `--all-p` enumerates 2^(d-1) parameters; past this the listing is no
/// longer a table anyone reads.
const ALL_P_MAX_DIM: u32 = 16;

/// The per-order count table has d + 1 rows; omitted for dimensions where
/// nobody scrolls through it.
const OMEGA_TABLE_MAX_DIM: u32 = 32;

pub fn run(format: Format, d: u32, p: Option<u128>, all_p: bool) -> Result<i32, UsageError> {
    let specs = if all_p {
        if d == 0 {
            return Err(UsageError("dimension must be at least 1".into()));
        }
        if d > ALL_P_MAX_DIM {
            return Err(UsageError(format!(
                "--all-p enumerates 2^(d-1) parameters; supported for d <= {ALL_P_MAX_DIM}, got d = {d}"
            )));
        }
        (1..=(1u128 << (d - 1)))
            .map(|p| ConstantSpec::new(d, p))
            .collect::<agmon_core::Result<Vec<_>>>()?
    } else {
        vec![ConstantSpec::new(
            d,
            p.expect("clap requires --p without --all-p"),
        )?]
    };

    let rho1 = rho1(d)?;
    let rho2 = rho2(d)?;
    let kmin = kappa_min(d)?;
    let omega = if d <= OMEGA_TABLE_MAX_DIM {
        Some(omega_rows(d)?)
    } else {
        None
    };

    match format {
        Format::Json => print_json(&json_doc(d, &rho1, &rho2, &kmin, &omega, &specs)),
        Format::Table => print_table(d, &rho1, &rho2, &kmin, &omega, &specs),
    }
    Ok(0)
}

/// (order, count) rows per branch; counts rendered as decimal strings since
/// they are binomials in d and outgrow fixed-width integers.
type OmegaRows = (Vec<(u32, String)>, Vec<(u32, String)>);

fn omega_rows(d: u32) -> Result<OmegaRows, UsageError> {
    let mut with = Vec::new();
    for order in 1..=d {
        with.push((order, omega_count(d, order, Branch::WithAxis1)?.to_string()));
    }
    let mut without = Vec::new();
    for order in 0..d {
        without.push((
            order,
            omega_count(d, order, Branch::WithoutAxis1)?.to_string(),
        ));
    }
    Ok((with, without))
}

/// A pure power of two as `{"log2_exponent": ..., "approx": ...}`.
fn pow2_json(v: &ConstantValue) -> Json {
    let e = pure_pow2_exponent(v).expect("branch products are pure powers of two");
    Json::Obj(vec![
        ("log2_exponent".into(), Json::Str(exponent_string(e))),
        ("approx".into(), Json::Float(v.approx())),
    ])
}

/// A general constant as exact exponents of 2 and d plus the approximation.
fn value_json(v: &ConstantValue) -> Json {
    Json::Obj(vec![
        (
            "pow2_exponent".into(),
            Json::Str(exponent_string(v.pow2_exponent())),
        ),
        (
            "d_log_coeff".into(),
            Json::Str(exponent_string(v.d_log_coeff())),
        ),
        ("approx".into(), Json::Float(v.approx())),
    ])
}

fn omega_json(rows: &[(u32, String)]) -> Json {
    Json::Arr(
        rows.iter()
            .map(|(order, count)| {
                Json::Obj(vec![
                    ("order".into(), Json::Int(*order as i128)),
                    ("count".into(), Json::Str(count.clone())),
                ])
            })
            .collect(),
    )
}

fn json_doc(
    d: u32,
    rho1: &ConstantValue,
    rho2: &ConstantValue,
    kmin: &ConstantValue,
    omega: &Option<OmegaRows>,
    specs: &[ConstantSpec],
) -> Json {
    let mut doc = vec![
        ("d".into(), Json::Int(d as i128)),
        ("rho1".into(), pow2_json(rho1)),
        ("rho2".into(), pow2_json(rho2)),
        ("kappa_min".into(), pow2_json(kmin)),
    ];
    if let Some((with, without)) = omega {
        doc.push((
            "omega".into(),
            Json::Obj(vec![
                ("with_d1".into(), omega_json(with)),
                ("without_d1".into(), omega_json(without)),
            ]),
        ));
    }
    let entries = specs
        .iter()
        .map(|spec| {
            Json::Obj(vec![
                ("p".into(), json_u128(spec.p())),
                ("kappa".into(), pow2_json(&spec.kappa())),
                ("mu".into(), value_json(&spec.mu())),
                (
                    "gradient_exponent".into(),
                    Json::Float(spec.gradient_exponent()),
                ),
                ("l2_exponent".into(), Json::Float(spec.l2_exponent())),
            ])
        })
        .collect();
    doc.push(("entries".into(), Json::Arr(entries)));
    Json::Obj(doc)
}

/// `2^e ~ approx`, or the two-factor form when a d power is present.
fn value_desc(v: &ConstantValue, d: u32) -> String {
    let approx = float_cell(v.approx());
    match pure_pow2_exponent(v) {
        Some(e) => format!("2^({}) ~ {approx}", exponent_string(e)),
        None => format!(
            "2^({}) * {d}^({}) ~ {approx}",
            exponent_string(v.pow2_exponent()),
            exponent_string(v.d_log_coeff())
        ),
    }
}

fn print_table(
    d: u32,
    rho1: &ConstantValue,
    rho2: &ConstantValue,
    kmin: &ConstantValue,
    omega: &Option<OmegaRows>,
    specs: &[ConstantSpec],
) {
    println!("d = {d}");
    println!();
    println!("branch products");
    println!("  rho1      = {}", value_desc(rho1, d));
    println!("  rho2      = {}", value_desc(rho2, d));
    println!("  kappa_min = {}", value_desc(kmin, d));
    if let Some((with, without)) = omega {
        println!();
        println!("term counts by order");
        println!(
            "  {} {} {}",
            pad("order", 6),
            pad("with_d1", 12),
            pad("without_d1", 12)
        );
        for order in 0..=d {
            let w = with
                .iter()
                .find(|(o, _)| *o == order)
                .map_or("-".to_string(), |(_, c)| c.clone());
            let wo = without
                .iter()
                .find(|(o, _)| *o == order)
                .map_or("-".to_string(), |(_, c)| c.clone());
            println!(
                "  {} {} {}",
                pad(&order.to_string(), 6),
                pad(&w, 12),
                pad(&wo, 12)
            );
        }
    }
    for spec in specs {
        println!();
        println!("p = {}", spec.p());
        println!("  kappa             = {}", value_desc(&spec.kappa(), d));
        println!("  mu                = {}", value_desc(&spec.mu(), d));
        println!(
            "  gradient exponent = {}",
            float_cell(spec.gradient_exponent())
        );
        println!("  l2 exponent       = {}", float_cell(spec.l2_exponent()));
    }
}
