//! Centralizer dimension three ways, and the f_{i,j;r} basis.

use finite_w::verify::oracle_centralizer_dim;
use finite_w::yangian::{admissible_triples, centralizer_dim_formula};
use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    for (n, l, e) in [(2, 3, Sign::Plus), (2, 3, Sign::Minus), (2, 4, Sign::Plus)] {
        let config = make_config(n, l, e)?;
        let triples = admissible_triples(&config);
        println!(
            "{config}: oracle {}, admissible {}, formula {}",
            oracle_centralizer_dim(&config),
            triples.len(),
            centralizer_dim_formula(&config)
        );
        let w = WAlgebra::new(config)?;
        for t in triples {
            let f = w.ge_basis_element(t.i, t.j, t.r - 1);
            let central = w.lie().bracket(w.e(), &f)?.is_zero();
            println!(
                "  f_({},{};{}) has {} terms, central {central}",
                t.i,
                t.j,
                t.r - 1,
                f.terms().len()
            );
        }
    }
    Ok(())
}
