//! PBW straightening in U(g) and the projection onto U(p).

use finite_w::{make_config, Sign, WAlgebra};

fn main() -> finite_w::Result<()> {
    let w = WAlgebra::new(make_config(2, 2, Sign::Plus)?)?;
    let u = w.uea();
    println!("basis of g: {:?}", w.lie().basis());
    let x = u.f(-3, -1);
    let y = u.f(-1, -3);
    let m = u.f(1, -3);
    println!("x y = {:?}", u.to_json(&u.multiply(&x, &y)?));
    println!("y x = {:?}", u.to_json(&u.multiply(&y, &x)?));
    println!("[x, y] = {:?}", u.to_json(&u.commutator(&x, &y)?));
    let word = u.multiply(&u.multiply(&m, &x)?, &y)?;
    println!("m x y = {:?}", u.to_json(&word));
    println!("pr(m x y) = {:?}", u.to_json(&w.pr(&word)));
    println!("cached products: {}", u.cached_products());
    Ok(())
}
