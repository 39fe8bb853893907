//! Classify order-1 equations σ(y) = a·y over Q(t) with σ(t) = t + 1 by
//! σ-quotients: a = σ(r)/r gives the trivial group, a^m = σ(r)/r with
//! least m > 1 gives μ_m, and no relation up to the bound leaves the full
//! multiplicative group of the constants.
//!
//! Run with: cargo run --example order1_classification

use diffgal::algebra::parse_rational_function;
use diffgal::sigma::{order1_group, DifferenceFieldSpec, Order1Group};

fn main() {
    let spec = DifferenceFieldSpec::shift1();
    let table = [
        "(t+1)/t",
        "1",
        "(t+2)/t",
        "t/(t+1)",
        "-1",
        "-(t+1)/t",
        "4",
        "9/4",
        "(t+1)*(t+3)/(t*(t+2))",
    ];
    for a_text in table {
        let a = parse_rational_function(a_text, &spec.symbols()).unwrap();
        let line = match order1_group(&spec, &a, 12).unwrap() {
            Order1Group::Trivial(cert) => {
                format!("trivial            a = sigma(r)/r with r = {}", cert.r)
            }
            Order1Group::Mu(m, cert) => {
                format!("mu_{m}               a^{m} = sigma(r)/r with r = {}", cert.r)
            }
            Order1Group::FullUpToBound(bound) => {
                format!("G_m up to bound    no relation with m <= {bound}")
            }
        };
        println!("a = {a_text:<24} {line}");
    }
}
