//! The generators s_{i,j}(ω_r) of a small W-algebra and their membership.

use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    let config = make_config(2, 3, Sign::Plus)?;
    let w = WAlgebra::new(config)?;
    for r in 1..=config.l {
        for i in w.rows().iter() {
            for j in w.rows().iter() {
                let g = w.w_generator(i, j, r)?;
                let member = w.is_in_w(&g)?.is_member();
                println!("s_({i},{j})(omega_{r}): {} terms, in W: {member}", g.len());
            }
        }
    }
    println!(
        "omega_2 = {:?}",
        w.omega(2)?.terms().keys().collect::<Vec<_>>()
    );
    Ok(())
}
