use primset::ablocks::{
    a_membership, enumerate_a, extract_primitive_subset, odd_part, ExtractionStrategy,
};
use primset::construct::enumerate_s;
use primset::primitive::{erdos_sum, is_primitive_dense, is_primitive_pairwise};
use primset::sieve::{
    factorize, omega_table, primes_up_to, OmegaSieve, OmegaTable, Segment, SieveConfig,
};
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn trial_omega(mut n: u64) -> (u8, u8) {
    let (mut big, mut little) = (0, 0);
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            little += 1;
            while n.is_multiple_of(p) {
                n /= p;
                big += 1;
            }
        }
        p += 1;
    }
    if n > 1 {
        big += 1;
        little += 1;
    }
    (big, little)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn big_omega_additive_on_coprime_pairs(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        prop_assume!(gcd(a, b) == 1);
        let fa = factorize(a).len();
        let fb = factorize(b).len();
        prop_assert_eq!(factorize(a * b).len(), fa + fb);
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..u64::MAX / 2) {
        let f = factorize(n);
        prop_assert_eq!(f.iter().product::<u64>(), n);
        prop_assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn omega_table_matches_trial_division(lo in 1u64..5_000_000, len in 1u64..3000) {
        let seg = Segment::new(lo, lo + len - 1).unwrap();
        let t = omega_table(seg).unwrap();
        for n in (lo..lo + len).step_by(7) {
            let (big, little) = trial_omega(n);
            prop_assert_eq!(t.big_omega(n), big, "n = {}", n);
            prop_assert_eq!(t.little_omega(n), little, "n = {}", n);
        }
    }

    #[test]
    fn segment_size_does_not_change_tables(size in 1usize..5000, lo in 1u64..100_000) {
        let hi = lo + 4000;
        let small = OmegaSieve::with_config(hi, SieveConfig::with_segment_size(size)).unwrap();
        let whole = omega_table(Segment::new(lo, hi).unwrap()).unwrap();
        let mut big = Vec::new();
        for seg in small.segments(lo, hi) {
            big.extend_from_slice(small.table(seg).unwrap().big_omega_slice());
        }
        prop_assert_eq!(&big[..], whole.big_omega_slice());
    }

    #[test]
    fn omega_dump_round_trips(lo in 1u64..1_000_000, len in 1u64..500) {
        let t = omega_table(Segment::new(lo, lo + len - 1).unwrap()).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = OmegaTable::read_from(&buf[..]).unwrap();
        prop_assert_eq!(back.segment(), t.segment());
        prop_assert_eq!(back.big_omega_slice(), t.big_omega_slice());
        prop_assert_eq!(back.little_omega_slice(), t.little_omega_slice());
    }

    #[test]
    fn s_is_monotone_in_x(x in 30u64..20_000, y in 30u64..20_000) {
        let primes = primes_up_to(200).unwrap();
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let a = enumerate_s(lo, &primes).unwrap();
        let b = enumerate_s(hi, &primes).unwrap();
        prop_assert_eq!(&b[..a.len()], &a[..]);
    }

    #[test]
    fn dyadic_extraction_is_primitive(x in 5u64..2_000_000) {
        let e = extract_primitive_subset(x, ExtractionStrategy::DyadicBlock).unwrap();
        prop_assert!(e.verification.unwrap().primitive);
        prop_assert!(e.members.unwrap().iter().all(|&a| a_membership(a).is_some()));
    }

    #[test]
    fn erdos_sum_ignores_order(mut set in prop::collection::vec(2u64..1_000_000, 0..200), seed in any::<u64>()) {
        let forward = erdos_sum(&set);
        // deterministic shuffle
        let n = set.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            set.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert!((erdos_sum(&set) - forward).abs() <= 1e-15 * forward.max(1.0));
    }

    #[test]
    fn verifiers_agree(set in prop::collection::vec(1u64..3000, 0..60)) {
        let a = is_primitive_pairwise(&set).unwrap();
        let b = is_primitive_dense(&set, 3000).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn odd_part_is_odd(s in 1u64..u64::MAX) {
        let o = odd_part(s).unwrap();
        prop_assert_eq!(o.odd % 2, 1);
        prop_assert_eq!(o.odd << o.v, s);
    }
}

#[test]
fn a_blocks_partition_small_range() {
    let members = enumerate_a(1 << 16).unwrap();
    let mut per_block = [0usize; 4];
    for &a in &members {
        per_block[a_membership(a).unwrap() as usize] += 1;
    }
    // A_1 = 2·{3,5,7}, A_2 = 4·odd in (4, 64], A_3 = 8·odd in (32, 8192]
    assert_eq!(per_block, [0, 3, 30, 4080]);
}
