use ddforms_core::arith::Rat64;
use ddforms_core::hecke::*;
use ddforms_core::registry::lift_input_recipe;

fn main() {
    let window = siegel_window(Rat64::from_integer(3), Rat64::from_integer(3));
    let recipe = lift_input_recipe("nabla2_in").unwrap();
    let input = LiftInput::from_recipe(&recipe, window.max_tau, window.max_omega).unwrap();
    println!("input coeffs (n,l) -> c:");
    for ((n, l), c) in input.coeffs.iter().take(12) {
        println!("  ({n},{l}) -> {c}");
    }
    let lhs = arithmetic_lift(&input, &window).unwrap();
    let rhs = closed_form_oracle("nabla2", &window).unwrap();
    match lhs.series.first_mismatch(&rhs.series, &window) {
        Some(m) => println!("MISMATCH at q^{} r^{} s^{}: lift={} oracle={}", m.tau, m.z, m.omega, m.left, m.right),
        None => println!("agree"),
    }
}
