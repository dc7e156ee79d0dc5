//! Scanning scalar combinations of a system for hidden poles.
//!
//! A point `zeta` is a "system pole" when some nontrivial scalar
//! combination `c_1 f_1 + c_2 f_2` has a pole there. A generic combination
//! only sees the poles of smallest modulus — deeper poles are shadowed —
//! so the scan walks a projective grid of coefficients and records, for
//! each target, which combinations witness a singularity (radius + ratio
//! limit agree) and which witness a pole (stable row denominator zero).
//!
//! Run with: cargo run --example system_pole_scan

use padelab::diagnostics::{projective_grid, system_pole_scan, ScanParams};
use padelab::scalar::{parse_rational, Backend, CRat, Rat, C64};
use padelab::series::{catalog_rational, RationalTerm, SeriesSystem};
use num_traits::Zero;

fn crq(s: &str) -> CRat {
    CRat::new(parse_rational(s).expect("literal"), Rat::zero())
}

fn main() {
    let b = Backend::Exact;
    // Poles: f1 at {1, 3}, f2 at {2, 4}. The system poles are {1, 2, 3, 4},
    // but a generic combination only exposes the closest one.
    let f1 = catalog_rational(
        b,
        vec![
            RationalTerm::simple(crq("1"), crq("1")),
            RationalTerm::simple(crq("1"), crq("3")),
        ],
        "1/(1-z) + 1/(3-z)",
    );
    let f2 = catalog_rational(
        b,
        vec![
            RationalTerm::simple(crq("1"), crq("2")),
            RationalTerm::simple(crq("1"), crq("4")),
        ],
        "1/(2-z) + 1/(4-z)",
    );
    let sys = SeriesSystem::new(vec![f1, f2], "four-pole system");

    let grid = projective_grid(&b, 2).expect("grid");
    println!("scanning {} projective coefficient points\n", grid.len());

    let params = ScanParams {
        n_samples: 24,
        fabry_n: 40,
        row_range: (6, 14),
        ..ScanParams::default()
    };

    for zeta in [1.0, 2.0, 3.0] {
        let rep = system_pole_scan(&sys, &[1, 1], C64::new(zeta, 0.0), &grid, &params)
            .expect("scan");
        println!(
            "zeta = {zeta}: singularity witnesses {}, pole witnesses {}, ring matches {}",
            rep.singularity_points().count(),
            rep.pole_points().count(),
            rep.ring_points().count(),
        );
        if let Some(p) = rep.pole_points().next() {
            let c: Vec<String> = p
                .coefficients
                .iter()
                .map(|z| format!("{:.2}", z.re))
                .collect();
            println!("  e.g. witnessed by combination ({})", c.join(", "));
        }
        match zeta as i64 {
            1 => println!("  every nonvanishing combination sees the closest pole\n"),
            2 => println!(
                "  only combinations with c_1 = 0 reach past the pole at 1;\n  \
                 the scan finds exactly those\n"
            ),
            _ => println!(
                "  no single combination is analytic past 2 *and* singular at 3,\n  \
                 so there is no direct witness — but the c_2 = 0 combination has\n  \
                 1-meromorphy radius 3, the ring signature reported above\n"
            ),
        }
    }
}
