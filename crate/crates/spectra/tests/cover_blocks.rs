use fieldlab_numerics::{herm_eig, sym_eig};
use fieldlab_spectra::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_base(n: usize, extra: usize, seed: u64) -> CoverGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    // random spanning tree keeps the base connected
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, rng.random_range(-2..=2)));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u, v, rng.random_range(-2..=2)));
        }
    }
    CoverGraph {
        n_vertices: n,
        edges,
        degree: 1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn blocks_reproduce_cover_spectrum(n in 2usize..8, extra in 0usize..8, deg in 1usize..=12, seed in any::<u64>()) {
        let mut g = random_base(n, extra, seed);
        g.degree = deg;
        let cover = cycle_cover_build(&g).unwrap();
        let big = sym_eig(&cover.laplacian).unwrap().values;
        let union: Vec<f64> = twisted_block_decompose(&g)
            .unwrap()
            .iter()
            .flat_map(|b| herm_eig(&b.laplacian).unwrap().values)
            .collect();
        prop_assert!(multiset_distance(&big, &union) <= 1e-10);
    }

    #[test]
    fn deck_shift_commutes(n in 2usize..7, extra in 0usize..6, deg in 1usize..=12, seed in any::<u64>()) {
        let mut g = random_base(n, extra, seed);
        g.degree = deg;
        let c = cycle_cover_build(&g).unwrap();
        let p = deck_permutation(&g);
        prop_assert_eq!(&p * &c.laplacian, &c.laplacian * &p);
        prop_assert_eq!(c.laplacian.clone(), c.laplacian.transpose());
        prop_assert_eq!(c.laplacian.nrows(), n * deg);
    }
}
