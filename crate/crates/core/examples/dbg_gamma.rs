fn main() {
    use num_complex::Complex64;
    use twistlab_core::special::upper_gamma;
    for (a, x) in [(1.0, 0.5), (2.5, 1.0), (0.8, 3.0), (4.0, 7.0), (1.5, 20.0)] {
        let v = upper_gamma(Complex64::new(a, 0.0), x);
        println!("{a} {x} {v}");
    }
}
