//! Heller-operator identities: the omega-tensor lemma, duality, additivity
//! of shifts on the trivial module, and exactness bookkeeping.

use modrep::config::RunConfig;
use modrep::decomp::strip_projectives;
use modrep::heller::{omega, omega_n, projective_cover, radical_submodule};
use modrep::hom::is_isomorphic;
use modrep::rep::Module;
use modrep::testkit::sample_modules;
use modrep::{Field, GroupSpec};

fn k() -> Module {
    Module::trivial(GroupSpec::new(3, 2).unwrap(), Field::prime(3).unwrap()).unwrap()
}

#[test]
fn omega_tensor_identity_on_random_pairs() {
    let cfg = RunConfig::default();
    let mods = sample_modules(&cfg, 0x4e11e7, 12, 3, 4);
    for pair in mods.chunks(2) {
        if pair.len() < 2 {
            continue;
        }
        let (m, n) = (&pair[0], &pair[1]);
        let lhs = strip_projectives(&omega(&m.tensor(n).unwrap())).0;
        let rhs = strip_projectives(&omega(m).tensor(n).unwrap()).0;
        assert!(
            is_isomorphic(&lhs, &rhs, &cfg).unwrap(),
            "omega-tensor identity failed at dims {} and {}",
            m.dim(),
            n.dim()
        );
    }
}

#[test]
fn omega_duality() {
    let cfg = RunConfig::default();
    let mods = sample_modules(&cfg, 0x4e11e8, 6, 3, 3);
    for m in mods {
        for n in [-2i64, -1, 1, 2] {
            let lhs = omega_n(&m.dual(), n);
            let rhs = omega_n(&m, -n).dual();
            assert!(is_isomorphic(&lhs, &rhs, &cfg).unwrap(), "duality failed at shift {n}");
        }
    }
}

#[test]
fn omega_shifts_add_on_trivial_module() {
    let cfg = RunConfig::default();
    let k = k();
    let translates: Vec<(i64, Module)> =
        (-2..=2).map(|i| (i, omega_n(&k, i))).collect();
    for (i, mi) in &translates {
        for (j, mj) in &translates {
            if i + j < -2 || i + j > 2 {
                continue;
            }
            let prod = mi.tensor(mj).unwrap();
            let core = strip_projectives(&prod).0;
            let expected = translates.iter().find(|(s, _)| s == &(i + j)).unwrap();
            assert!(
                is_isomorphic(&core, &expected.1, &cfg).unwrap(),
                "omega^{i} (x) omega^{j} core is not omega^{}",
                i + j
            );
        }
    }
}

#[test]
fn cover_exactness_bookkeeping() {
    let cfg = RunConfig::default();
    for m in sample_modules(&cfg, 0x4e11e9, 6, 3, 4) {
        let (core, _) = strip_projectives(&m);
        if core.dim() == 0 {
            continue;
        }
        let c = projective_cover(&core).unwrap();
        let q = core.group().order();
        assert_eq!(c.cover_rank, core.dim() - radical_submodule(&core).cols());
        assert_eq!(c.kernel.dim(), c.cover_rank * q - core.dim());
        assert!(c.cover_map.mul(&c.kernel_inclusion).is_zero());
        assert_eq!(c.cover_map.rank(), core.dim());
        // minimality: omega never carries a free summand
        let (_, free) = strip_projectives(&c.kernel);
        assert_eq!(free, 0);
    }
}
