//! Exact arithmetic in ℚ(√d): parsing, field operations, ordering.
use relent::Scalar;

fn main() {
    let a: Scalar = "1+sqrt(2)".parse().unwrap();
    let b = Scalar::rational(1, 3);
    println!("a = {a}  (~{:.6})", a.to_f64());
    println!("a·ā = {}  (norm, rational)", &a * &a.conj());
    println!("1/a = {}", a.recip());
    println!("a² = {}", a.pow(2));
    println!("a·b − 1/a = {}", &(&a * &b) - &a.recip());
    // ordering is exact: compare 1/a against b without floating point
    println!("1/a > b: {}", a.recip() > b);
    let eps = &(&(&Scalar::from(5) * &Scalar::sqrt(2)) - &Scalar::from(6)) / &Scalar::from(3);
    println!("(5√2 − 6)/3 = {eps}, positive: {}", eps.signum() > 0);
    // mixing fields is an error, not a silent approximation
    println!("√2 + √3 → {:?}", Scalar::sqrt(2).try_add(&Scalar::sqrt(3)).map(|s| s.to_string()));
}
