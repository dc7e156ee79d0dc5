//! Incomplete rows and the telescoping difference.
//!
//! An incomplete approximant of type `(n, m, m_star)` fixes only `m_star`
//! order conditions while allowing denominator degree `m`: the surplus
//! `m - m_star` degrees of freedom make the solution non-unique, but the
//! cross-difference of consecutive rows factors rigidly as
//!
//!     p_{n+1} q_n - p_n q_{n+1} = A_n z^{power} q*_n
//!
//! and the constants `A_n` alone determine a radius: `R*` is the reciprocal
//! of `limsup |A_n|^{1/n}`. When the function is rational and fully
//! captured, every cross-difference vanishes — the degenerate signature.
//!
//! Run with: cargo run --example incomplete_telescope

use padelab::approximants::{incomplete_row, telescope_steps};
use padelab::diagnostics::{estimate_r_star, RadiusValue};
use padelab::scalar::{parse_rational, Backend, CRat, Rat};
use padelab::series::{catalog_log_branch, catalog_rational, combine, RationalTerm};
use num_traits::Zero;

fn crq(s: &str) -> CRat {
    CRat::new(parse_rational(s).expect("literal"), Rat::zero())
}

fn main() {
    let b = Backend::Exact;

    // A pole at 1 plus a logarithmic branch point at 2: the pole is captured
    // by the denominator, the branch point keeps the telescope alive.
    let pole = catalog_rational(
        b,
        vec![RationalTerm::simple(crq("1"), crq("1"))],
        "1/(1-z)",
    );
    let branch = catalog_log_branch(b, crq("2"), "ln(1 - z/2)");
    let f = combine(
        vec![(b.one(), pole), (b.one(), branch)],
        "1/(1-z) + ln(1 - z/2)",
    );

    let records = incomplete_row(&f, 2, 2, 6..=34, 30).expect("rows solve");
    let steps = telescope_steps(&records, 30).expect("telescope");

    println!("telescope constants for f = {}:", f.label());
    println!("{:>3} {:>12} {:>10}", "n", "|A_n|^(1/n)", "power");
    for s in steps.iter().filter(|s| !s.degenerate).take(10) {
        let a = s.a.abs_f64();
        println!("{:>3} {:>12.6} {:>10}", s.n, a.powf(1.0 / s.n as f64), s.power);
    }
    println!("  ...");

    let est = estimate_r_star(&steps, 10).expect("estimate");
    match est.radius {
        RadiusValue::Finite(r) => println!(
            "\nR* estimate: {r:.4}  (the branch point sits at 2; the \
             reciprocal limsup converges to it from above)"
        ),
        RadiusValue::Infinite => println!("\nR* estimate: infinite"),
    }

    // Contrast: a fully captured rational function kills the telescope.
    let g = catalog_rational(
        b,
        vec![
            RationalTerm::simple(crq("1"), crq("1")),
            RationalTerm::simple(crq("1"), crq("2")),
        ],
        "1/(1-z) + 1/(2-z)",
    );
    let g_records = incomplete_row(&g, 2, 2, 4..=20, 30).expect("rows solve");
    let g_steps = telescope_steps(&g_records, 30).expect("telescope");
    let degenerate = g_steps.iter().filter(|s| s.degenerate).count();
    println!(
        "\nrational contrast ({}): {degenerate} of {} steps degenerate",
        g.label(),
        g_steps.len()
    );
    let g_est = estimate_r_star(&g_steps, 10).expect("estimate");
    println!(
        "R* verdict: {}",
        match g_est.radius {
            RadiusValue::Infinite => "infinite — the exact-recovery signature".to_string(),
            RadiusValue::Finite(r) => format!("{r:.4}"),
        }
    );
}
