use primset::ablocks::{
    block_reciprocal_sum, count_a, density_diagnostic, erdos_sum_a, extract_primitive_subset,
    reciprocal_sum_a, ExtractionStrategy,
};

#[test]
fn greedy_increments_shrink() {
    let sums: Vec<f64> = [1u64 << 8, 1 << 16, 1 << 32]
        .iter()
        .map(|&x| {
            extract_primitive_subset(x, ExtractionStrategy::GreedyAscending)
                .unwrap()
                .reciprocal_sum
        })
        .collect();
    let inc = [sums[0], sums[1] - sums[0], sums[2] - sums[1]];
    assert!(inc[0] > inc[1] && inc[1] > inc[2], "{inc:?}");
}

#[test]
fn all_of_a_diverges_blockwise() {
    // each block contributes close to log(2)/2 to Σ 1/a
    let x = 1u64 << 32;
    let total = reciprocal_sum_a(x).unwrap();
    let blocks: f64 = (1..=4)
        .map(|j| block_reciprocal_sum(j).unwrap().reciprocal_sum)
        .sum();
    assert!((total - blocks).abs() < 1e-9);
    assert!(erdos_sum_a(x).unwrap() < total / 4.0);
}

#[test]
fn counting_function_is_of_order_x_over_log_x() {
    let d: Vec<f64> = [1u64 << 16, 1 << 24, 1 << 32]
        .iter()
        .map(|&x| density_diagnostic(x))
        .collect();
    assert!(d.iter().all(|&v| (0.1..10.0).contains(&v)), "{d:?}");
    assert_eq!(count_a(1 << 32), 3 + 30 + 4080 + 134_215_680);
}
