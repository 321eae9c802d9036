use hgemm::gemm::{count_microkernel_ops, pack_a, pack_b, BlockingConfig};
use hgemm::{random_matrix, Distribution, QuatMatrix, Quaternion};

#[test]
fn per_step_budget() {
    for kc in [0usize, 1, 2, 7, 64] {
        let cfg = BlockingConfig::new(2, 2, kc.max(1));
        let a = random_matrix(2, kc, 1, Distribution::default());
        let b = random_matrix(kc, 2, 2, Distribution::default());
        let (pa, pb) = (pack_a(a.view(), Quaternion::E0, &cfg), pack_b(b.view(), &cfg));
        let mut c = QuatMatrix::zeros(2, 2);
        let n = count_microkernel_ops(pa.as_slice(), pb.as_slice(), kc, &mut c.view_mut());
        assert_eq!(n.loads, 4 + 4 * kc as u64, "kc = {kc}");
        assert_eq!(n.shuffles, 16 + 8 * kc as u64, "kc = {kc}");
        assert_eq!(n.arith, 32 * kc as u64, "kc = {kc}");
        assert_eq!(n.stores, 4);
    }
}
