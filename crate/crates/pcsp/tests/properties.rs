//! Randomized invariants over small structures, conditions and tables.

use proptest::prelude::*;

use pcsp::conditions::{parse_condition, serialize_condition};
use pcsp::core::{
    decode_tuple, encode_tuple, parse_structure, power, serialize_structure, PromiseTemplate,
    Signature, Structure,
};
use pcsp::homsearch::{find_hom, gac, verify_hom, SearchOpts};
use pcsp::indicator::instance_to_condition;
use pcsp::minionlab::{
    enumerate_polymorphisms, is_polymorphism, minor_of, parse_function, serialize_function,
    FunctionTable,
};
use pcsp::SizeCap;

/// A digraph on 1..=4 vertices from an edge selection bitmask.
fn digraph_strategy() -> impl Strategy<Value = Structure> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |mask| {
            let edges: Vec<Vec<usize>> = (0..n * n)
                .filter(|&i| mask[i])
                .map(|i| vec![i / n, i % n])
                .collect();
            Structure::new(
                "g",
                n,
                Signature::new(vec![("e", 2)]).unwrap(),
                vec![edges],
            )
            .unwrap()
        })
    })
}

fn table_strategy(domain: usize, arity: usize) -> impl Strategy<Value = FunctionTable> {
    let size = domain.pow(arity as u32);
    proptest::collection::vec(0..domain, size).prop_map(move |values| {
        FunctionTable::new("f", domain, domain, arity, values).unwrap()
    })
}

proptest! {
    #[test]
    fn structure_serialize_round_trip(s in digraph_strategy()) {
        let text = serialize_structure(&s);
        let back = parse_structure(&text).unwrap();
        prop_assert_eq!(&back.relations, &s.relations);
        prop_assert_eq!(back.domain_size, s.domain_size);
        // Serialization of canonical form is a fixed point.
        prop_assert_eq!(serialize_structure(&back), text);
    }

    #[test]
    fn function_serialize_round_trip(f in table_strategy(3, 2)) {
        let text = serialize_function(&f);
        let back = parse_function(&text).unwrap();
        prop_assert_eq!(back.values, f.values);
        prop_assert_eq!(back.arity, f.arity);
    }

    #[test]
    fn condition_serialize_round_trip(a in digraph_strategy(), i in digraph_strategy()) {
        prop_assume!(!a.relations[0].is_empty() || i.relations[0].is_empty());
        let c = instance_to_condition(&a, &i).unwrap();
        let text = serialize_condition(&c);
        let back = parse_condition(&text).unwrap();
        prop_assert_eq!(back.symbols, c.symbols);
        prop_assert_eq!(back.identities, c.identities);
    }

    #[test]
    fn power_counts(s in digraph_strategy(), n in 1usize..=3) {
        let p = power(&s, n, &SizeCap::default()).unwrap();
        prop_assert_eq!(p.domain_size, s.domain_size.pow(n as u32));
        let m = s.relations[0].len() as u64;
        prop_assert_eq!(p.relations[0].len() as u64, m.pow(n as u32));
    }

    #[test]
    fn encode_decode_round_trip(base in 2usize..=5, args in proptest::collection::vec(0usize..5, 1..5)) {
        let args: Vec<usize> = args.into_iter().map(|a| a % base).collect();
        let code = encode_tuple(&args, base);
        prop_assert_eq!(decode_tuple(code, base, args.len()), args);
    }

    #[test]
    fn gac_keeps_every_hom(i in digraph_strategy(), t in digraph_strategy()) {
        let opts = SearchOpts::default();
        if let Some(h) = find_hom(&i, &t, &opts).unwrap() {
            prop_assert!(verify_hom(&i, &t, &h));
            let domains = gac(&i, &t).unwrap().expect("gac must not wipe out a sat instance");
            for (v, &b) in h.iter().enumerate() {
                prop_assert!(domains.candidates[v].contains(&b));
            }
        }
    }

    #[test]
    fn minors_of_polymorphisms_are_polymorphisms(
        idx in any::<prop::sample::Index>(),
        pi in proptest::collection::vec(0usize..2, 3),
    ) {
        let t = PromiseTemplate::diagonal(pcsp::core::horn());
        let (polys, _) = enumerate_polymorphisms(&t, 3, 10_000, &SizeCap::default()).unwrap();
        let g = idx.get(&polys);
        let f = minor_of(g, &pi, 2).unwrap();
        prop_assert!(is_polymorphism(&f, &t).unwrap().is_ok());
    }

    #[test]
    fn minor_composition_law(
        g in table_strategy(2, 3),
        pi in proptest::collection::vec(0usize..2, 3),
        sigma in proptest::collection::vec(0usize..4, 2),
    ) {
        // (g . pi) . sigma = g . (sigma o pi), taking minors stepwise.
        let lhs = minor_of(&minor_of(&g, &pi, 2).unwrap(), &sigma, 4).unwrap();
        let composed: Vec<usize> = pi.iter().map(|&p| sigma[p]).collect();
        let rhs = minor_of(&g, &composed, 4).unwrap();
        prop_assert_eq!(lhs.values, rhs.values);
    }
}
