//! Every runnable example, executed as a test.

mod exact_identities {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_identities.rs"));
}
mod q_polynomials {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/q_polynomials.rs"));
}
mod periodic_cycles {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/periodic_cycles.rs"));
}
mod hypergeometric_integral {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hypergeometric_integral.rs"));
}
mod qkz_solution {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qkz_solution.rs"));
}
mod classical_kz {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classical_kz.rs"));
}
mod trace_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trace_example.rs"));
}
mod verification_report {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verification_report.rs"));
}

#[test]
fn exact_identities_example() {
    exact_identities::run_example();
}

#[test]
fn q_polynomials_example() {
    q_polynomials::run_example();
}

#[test]
fn periodic_cycles_example() {
    periodic_cycles::run_example();
}

#[test]
fn hypergeometric_integral_example() {
    hypergeometric_integral::run_example();
}

#[test]
fn qkz_solution_example() {
    qkz_solution::run_example();
}

#[test]
fn classical_kz_example() {
    classical_kz::run_example();
}

#[test]
fn trace_example_example() {
    trace_example::run_example();
}

#[test]
fn verification_report_example() {
    verification_report::run_example();
}
