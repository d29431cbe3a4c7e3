//! Pyramid labels, grading and character for `(3,2,−)`.

use finite_w::pyramid::build_pyramid;
use finite_w::verify::oracle_jordan_type;
use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    let config = make_config(3, 2, Sign::Minus)?;
    let pyramid = build_pyramid(config);
    for i in pyramid.rows().iter().rev() {
        let row: Vec<i32> = pyramid.cols().iter().map(|p| pyramid.label(i, p)).collect();
        println!("row {i:>2}: {row:?}");
    }
    let w = WAlgebra::new(config)?;
    let d = w.decomposition();
    println!("m: {:?}", d.m);
    println!("h: {:?}", d.h);
    for (pair, value) in w.chi_map().support() {
        println!("chi(f{pair:?}) = {value}");
    }
    println!("Jordan type of e: {:?}", oracle_jordan_type(&config));
    Ok(())
}
