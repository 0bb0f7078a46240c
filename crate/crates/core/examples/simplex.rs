//! The equality-form simplex solver on its own.
//!
//! cargo run --example simplex

use expander_lp::lp_core::{solve, LpProblem, SolverOptions};

fn main() -> expander_lp::Result<()> {
    // maximize 3x + 2y  s.t.  x + y + s1 = 4,  x + 3y + s2 = 6,  x, y, s ≥ 0
    let mut p = LpProblem::new(4);
    p.objective = vec![3.0, 2.0, 0.0, 0.0];
    p.add_row(vec![1.0, 1.0, 1.0, 0.0], 4.0)?;
    p.add_row(vec![1.0, 3.0, 0.0, 1.0], 6.0)?;
    let sol = solve(&p, &SolverOptions::default())?;
    println!("status {:?}, objective {}, x = {:?}", sol.status, sol.objective_value, sol.values);
    println!("pivots {}, residual {:e}", sol.iterations, p.max_residual(&sol.values));

    // a redundant row and an infeasible variant
    p.add_row(vec![2.0, 4.0, 1.0, 1.0], 10.0)?;
    println!("with a redundant row: {:?}", solve(&p, &SolverOptions::default())?.status);
    p.add_row(vec![1.0, 0.0, 0.0, 0.0], -1.0)?;
    println!("with x = -1 added: {:?}", solve(&p, &SolverOptions::default())?.status);
    Ok(())
}
