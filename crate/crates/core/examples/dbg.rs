fn main() {
    use elliptic_units::qfield::*;
    use elliptic_units::rayclass::*;
    use elliptic_units::analytic::lattice::KLattice;
    use elliptic_units::analytic::theta_value;
    let k = make_field(-1).unwrap();
    let ctx = RayCtx::new(k.clone());
    let prec = 160;
    for (mx, my, label) in [(3i64, 0i64, "(3)"), (5, 0, "(5)"), (7, 0, "(7)")] {
        let m = IdealHNF::principal(&k, &Elt::from_int(mx, my)).unwrap();
        let g = ctx.group(&m).unwrap();
        println!("== modulus {label}: r_m = {}", g.r_m);
        for c in g.classes() {
            let a0 = g.class_representative(&c);
            let li = m.mul(&k, &a0.inverse(&k));
            let lat = KLattice::from_ideal(&k, &li);
            let one = Elt::from_int(1, 0);
            let (_, d0) = elliptic_units::analytic::shifted_zeta_at_zero(&k, &lat, &one, prec);
            let zd = d0.to_f64() / (g.r_m as f64);
            let th = theta_value(&k, &lat, &one, prec);
            let lnn = th.ln_norm().unwrap().to_f64();
            println!("  c={:?}: zeta'(0,c)={:+.12}  -ln|th|^2/12={:+.12}  ratio={:.6}",
                c, zd, -lnn/12.0, zd/(-lnn/12.0));
        }
    }
}
