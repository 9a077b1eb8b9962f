use std::fmt::Write as _;
use std::fs;

use hcalg::criterion::{check_symbol, Verdict, DEFAULT_MARGIN_FLOOR};
use hcalg::symbol::Symbol;
use hcalg::C64;

use crate::commands::{emit, outcome_svg, pipeline_options};
use crate::error::CliError;
use crate::ExamplesArgs;

/// One catalog entry and the verdict the check should reach.
pub struct Example {
    pub name: String,
    pub symbol: Symbol,
    pub expected: Verdict,
}

/// cos, sin, z e^z, e^z − a for a ∈ {1/4, 1/2, 1}, (a₀ + z²)ⁿ for
/// a₀ ∈ {0, 1/2, 1} and n ∈ {1, 2}, and the rose polynomial.
pub fn catalog() -> Vec<Example> {
    let pass =
        |name: &str, symbol: Symbol| Example { name: name.to_string(), symbol, expected: Verdict::Pass };
    let mut out = vec![pass("cos", Symbol::cos()), pass("sin", Symbol::sin()), pass("zexp", Symbol::zexp())];
    for a in [0.25, 0.5, 1.0] {
        out.push(pass(&format!("exp-a:{a}"), Symbol::exp_minus(C64::new(a, 0.0))));
    }
    for a0 in [0.0, 0.5, 1.0] {
        for n in [1, 2] {
            let symbol = Symbol::binomial_power(C64::new(a0, 0.0), C64::new(1.0, 0.0), 2, n)
                .expect("nonzero binomial");
            out.push(pass(&format!("({a0}+z^2)^{n}"), symbol));
        }
    }
    // No arc is expected to pass; a fail or inconclusive verdict both match.
    out.push(Example { name: "rose".into(), symbol: Symbol::rose(), expected: Verdict::Fail });
    out
}

fn matches(expected: Verdict, got: Verdict) -> bool {
    match expected {
        Verdict::Pass => got == Verdict::Pass,
        _ => got != Verdict::Pass,
    }
}

pub fn examples(args: &ExamplesArgs) -> Result<(), CliError> {
    if args.rays == 0 || args.grid < 2 {
        return Err(CliError::Config("--rays must be at least 1 and --grid at least 2".into()));
    }
    if let Some(dir) = &args.figures {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let opts = pipeline_options(1.0, args.rays, Some(2), args.grid, DEFAULT_MARGIN_FLOOR, 0.002);
    let mut table =
        String::from("example,symbol,verdict,expected,matches,min_margin,candidates,passes,r,eps\n");
    let mut mismatches = Vec::new();
    for (i, example) in catalog().into_iter().enumerate() {
        let outcome = check_symbol(&example.symbol, &opts);
        let verdict = outcome.report.verdict;
        let ok = matches(example.expected, verdict);
        if !ok {
            mismatches.push(example.name.clone());
        }
        let (r, eps) = outcome
            .report
            .chosen
            .map_or((String::new(), String::new()), |c| (c.r.to_string(), c.eps.to_string()));
        let _ = writeln!(
            table,
            "{},\"{}\",{},{},{},{},{},{},{},{}",
            example.name,
            example.symbol,
            verdict,
            example.expected,
            ok,
            outcome.report.min_margin,
            outcome.candidates,
            outcome.passes,
            r,
            eps
        );
        eprintln!("{}: {verdict}", example.name);
        if let Some(dir) = &args.figures {
            if let Some(svg) = outcome_svg(&outcome) {
                emit(Some(&dir.join(format!("{i:02}.svg"))), &svg)?;
            }
        }
    }
    emit(args.out.as_deref(), &table)?;
    if args.strict && !mismatches.is_empty() {
        return Err(CliError::Strict(format!("unexpected verdicts: {}", mismatches.join(", "))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_covers_the_families() {
        let c = catalog();
        assert_eq!(c.len(), 13);
        assert_eq!(c.iter().filter(|e| e.expected == Verdict::Pass).count(), 12);
    }
}
