use std::time::Duration;

use ks_forge::catalog;
use ks_forge::vectors::{
    realize_shared_from_pool, standard_pool_m101, vectorfind, verify_assignment, CandidatePool,
    VectorFindOutcome,
};

#[test]
fn expired_timeout_decides_nothing() {
    let d = catalog::get("22-11").unwrap().diagram;
    let pool = standard_pool_m101();
    assert_eq!(
        vectorfind(&d, &pool, Some(Duration::ZERO)),
        VectorFindOutcome::Indeterminate
    );
    assert_eq!(vectorfind(&d, &pool, None), VectorFindOutcome::NoSolution);
}

#[test]
fn table_pool_realizes_22_11() {
    let d = catalog::get("22-11").unwrap().diagram;
    let VectorFindOutcome::Assigned(va) = vectorfind(&d, &catalog::pool_22_11(), None) else {
        panic!("the table's own rays must work");
    };
    assert!(verify_assignment(&d, &va));
}

#[test]
fn reduction_keeps_shared_vertices_in_the_pool() {
    let pool = standard_pool_m101();
    for name in ["22-11", "23-12", "24-14-x"] {
        let d = catalog::get(name).unwrap().diagram;
        let VectorFindOutcome::Assigned(va) = realize_shared_from_pool(&d, &pool, None) else {
            panic!("{name} has no reduced assignment");
        };
        assert!(verify_assignment(&d, &va), "{name}");
        let mut private_outside = 0;
        for (v, r) in va.iter() {
            if d.degree(v) >= 2 {
                assert!(pool.position(r).is_some(), "{name}: {v}");
            } else if pool.position(r).is_none() {
                private_outside += 1;
            }
        }
        assert!(private_outside > 0, "{name}");
    }
}

#[test]
fn reduction_over_an_empty_pool_fails() {
    let d = catalog::get("22-11").unwrap().diagram;
    let pool = CandidatePool::new(Vec::new()).unwrap();
    assert_eq!(
        realize_shared_from_pool(&d, &pool, None),
        VectorFindOutcome::NoSolution
    );
}

#[test]
fn pool_files_parse() {
    let pool = CandidatePool::parse("# rays\n(1,0,0,0)\n(0,1,1,0)\n\n(1/r2,0,0,1/r2)\n").unwrap();
    assert_eq!(pool.len(), 3);
    assert!(CandidatePool::parse("(1,0,0,0)\n(2,0,0,0)\n").is_err());
}
