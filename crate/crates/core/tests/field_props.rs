//! Field axioms and matrix-kernel properties over the supported fields.

use modrep::field::Field;
use modrep::matrix::Matrix;
use proptest::prelude::*;

fn fields_under_test() -> Vec<Field> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for e in [1u32, 2, 3] {
            out.push(Field::extension(p, e).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(ix in 0usize..9, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let f = &fields_under_test()[ix];
        let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
        // associativity and commutativity
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        // distributivity
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        // units and inverses
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(a, 1), a);
        if a != 0 {
            let ai = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, ai), 1);
        }
    }

    #[test]
    fn kron_is_associative_entrywise(seed in 0u64..5000) {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let f = Field::prime(3).unwrap();
        let a = Matrix::random(f.clone(), 2, 3, &mut rng);
        let b = Matrix::random(f.clone(), 3, 2, &mut rng);
        let c = Matrix::random(f.clone(), 2, 2, &mut rng);
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn kron_rank_is_multiplicative(seed in 0u64..5000) {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let f = Field::prime(3).unwrap();
        let a = Matrix::random(f.clone(), 3, 3, &mut rng);
        let b = Matrix::random(f.clone(), 3, 3, &mut rng);
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn rank_plus_nullity(seed in 0u64..5000, rows in 1usize..5, cols in 1usize..5) {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        for f in [Field::prime(2).unwrap(), Field::prime(5).unwrap(), Field::extension(3, 2).unwrap()] {
            let m = Matrix::random(f.clone(), rows, cols, &mut rng);
            prop_assert_eq!(m.rank() + m.nullspace().cols(), cols);
        }
    }

    #[test]
    fn extend_scalars_is_a_ring_map(seed in 0u64..5000) {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let f3 = Field::prime(3).unwrap();
        let f9 = Field::extension(3, 2).unwrap();
        let a = Matrix::random(f3.clone(), 4, 4, &mut rng);
        let b = Matrix::random(f3.clone(), 4, 4, &mut rng);
        let (ea, eb) = (a.extend_scalars(&f9).unwrap(), b.extend_scalars(&f9).unwrap());
        prop_assert_eq!(a.mul(&b).extend_scalars(&f9).unwrap(), ea.mul(&eb));
        prop_assert_eq!(a.add(&b).extend_scalars(&f9).unwrap(), ea.add(&eb));
        // rank is field-extension stable
        prop_assert_eq!(a.rank(), ea.rank());
    }

    #[test]
    fn solve_finds_solutions_when_consistent(seed in 0u64..5000) {
        use rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let f = Field::prime(5).unwrap();
        let a = Matrix::random(f.clone(), 4, 3, &mut rng);
        let x = Matrix::random(f.clone(), 3, 2, &mut rng);
        let rhs = a.mul(&x);
        let sol = a.solve(&rhs).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul(&sol), rhs);
    }
}
