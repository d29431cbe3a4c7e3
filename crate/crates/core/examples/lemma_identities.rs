//! Every instance of the invariance lemmas for one even and one odd level.

use finite_w::verify::{lemma_parameters, LemmaId};
use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    for config in [
        make_config(2, 4, Sign::Plus)?,
        make_config(1, 3, Sign::Plus)?,
    ] {
        let w = WAlgebra::new(config)?;
        for lemma in LemmaId::all() {
            let params = lemma_parameters(lemma, &config);
            let mut passed = 0;
            for x in &params {
                if w.verify_section4_lemma(lemma, x)?.passed {
                    passed += 1;
                }
            }
            println!(
                "{config} lemma {lemma}: {passed}/{} instances",
                params.len()
            );
        }
    }
    Ok(())
}
