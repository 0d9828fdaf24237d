//! Small quadrature helpers shared by the kernel reductions and the profile code.

/// `n` equispaced nodes on `[a, b]` and the trapezoid weight for interior nodes.
///
/// Intended for integrands vanishing at both ends, where the end-point
/// half-weights do not matter.
pub fn trapezoid_nodes(a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    ((0..n).map(|i| a + i as f64 * h).collect(), h)
}

/// Composite trapezoid rule with proper end weights.
pub fn trapezoid(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (xs, h) = trapezoid_nodes(a, b, n);
    let inner: f64 = xs[1..n - 1].iter().map(|&x| f(x)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}

// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1] (positive half).
const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_09,
];

/// Composite 16-point Gauss-Legendre rule over `panels` equal panels.
pub fn gauss_legendre(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for (x, w) in GL16_X.iter().zip(&GL16_W) {
            acc += w * (f(mid - half * x) + f(mid + half * x));
        }
    }
    acc * 0.5 * h
}
