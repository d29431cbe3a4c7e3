//! Miura images of W-generators against the twisted Yangian formula.

use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    let config = make_config(2, 2, Sign::Minus)?;
    let w = WAlgebra::new(config)?;
    for r in 1..=config.l + 2 {
        for i in w.rows().iter() {
            for j in w.rows().iter() {
                let mu = w.miura(&w.w_generator(i, j, r)?)?;
                let kappa = w.kappa_s(i, j, r)?;
                let product = w.kappa_s_product_form(i, j, r)?;
                println!(
                    "({i},{j},{r}): miura = kappa {}, closed = product {}",
                    mu == kappa,
                    kappa == product
                );
            }
        }
    }
    println!(
        "kernel relation at r = l+1: {}",
        w.check_kernel_relation(config.l + 1)?.passed
    );
    println!(
        "symmetry up to l+3: {}",
        w.check_symmetry_relation(config.l + 3)?.passed
    );
    Ok(())
}
