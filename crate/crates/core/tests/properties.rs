use std::sync::OnceLock;

use fragfhe::circuit::{capacity_check, eval_encrypted, eval_exact, eval_plain, parse_circuit, Circuit, CircuitBuilder};
use fragfhe::homomorphic::{h_add, h_mul, h_mul_plain};
use fragfhe::numeric::seeded_rng;
use fragfhe::scheme::{decrypt, encrypt, keygen, EvaluationKey, Params, SecretKey};
use fragfhe::Natural;
use proptest::prelude::*;

fn keys() -> &'static (Params, SecretKey, EvaluationKey) {
    static CELL: OnceLock<(Params, SecretKey, EvaluationKey)> = OnceLock::new();
    CELL.get_or_init(|| {
        let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
        let (sk, ek) = keygen(&params, &mut seeded_rng(99)).unwrap();
        (params, sk, ek)
    })
}

#[derive(Debug, Clone)]
enum Op {
    Add(usize, usize),
    Mul(usize, usize),
    CMul(u32, usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Add(a, b)),
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Mul(a, b)),
        (0u32..50, any::<usize>()).prop_map(|(s, a)| Op::CMul(s, a)),
    ]
}

fn build(inputs: usize, ops: &[Op]) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut wires: Vec<_> = (0..inputs).map(|i| b.input(&format!("in_{i}"))).collect();
    for o in ops {
        let pick = |i: usize| wires[i % wires.len()];
        let w = match *o {
            Op::Add(x, y) => b.add(pick(x), pick(y)),
            Op::Mul(x, y) => b.mul(pick(x), pick(y)),
            Op::CMul(s, x) => b.cmul(s.into(), pick(x)),
        };
        wires.push(w);
    }
    let out = *wires.last().unwrap();
    b.finish(out).unwrap()
}

fn circuit_and_inputs() -> impl Strategy<Value = (Circuit, Vec<u32>)> {
    (1usize..5, prop::collection::vec(op(), 1..20)).prop_flat_map(|(n_in, ops)| {
        let c = build(n_in, &ops);
        (Just(c), prop::collection::vec(0u32..10007, n_in))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encrypted_circuits_match_plain((circuit, inputs) in circuit_and_inputs(), seed in any::<u64>()) {
        let (params, sk, ek) = keys();
        let mut rng = seeded_rng(seed);
        let plain: Vec<Natural> = inputs.iter().map(|&m| m.into()).collect();
        let enc: Vec<_> = plain.iter().map(|m| encrypt(sk, params, m, &mut rng).unwrap()).collect();
        let got = decrypt(sk, &eval_encrypted(&circuit, &enc, ek).unwrap());
        prop_assert_eq!(got, eval_plain(&circuit, &plain, params.p()).unwrap());
    }

    #[test]
    fn capacity_check_is_sound((circuit, inputs) in circuit_and_inputs(), bound in 0u32..20, seed in any::<u64>()) {
        let (params, sk, ek) = keys();
        let mut rng = seeded_rng(seed);
        let plain: Vec<Natural> = inputs.iter().map(|&m| Natural::from(m % (bound + 1))).collect();
        let report = capacity_check(&circuit, &bound.into(), params.p());
        let exact = eval_exact(&circuit, &plain).unwrap();
        prop_assert!(exact <= report.max_product_bound);
        if report.bound_ok {
            let enc: Vec<_> = plain.iter().map(|m| encrypt(sk, params, m, &mut rng).unwrap()).collect();
            prop_assert_eq!(decrypt(sk, &eval_encrypted(&circuit, &enc, ek).unwrap()), exact);
        }
    }

    #[test]
    fn render_then_parse_is_identity((circuit, _) in circuit_and_inputs()) {
        let text = circuit.render();
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(back.render(), text);
        prop_assert_eq!(back, circuit);
    }

    #[test]
    fn single_operations_decrypt(m in 0u32..10007, m2 in 0u32..10007, s in 0u32..10007, seed in any::<u64>()) {
        let (params, sk, ek) = keys();
        let mut rng = seeded_rng(seed);
        let p = 10007u64;
        let a = encrypt(sk, params, &m.into(), &mut rng).unwrap();
        let b = encrypt(sk, params, &m2.into(), &mut rng).unwrap();
        let n = params.n();
        prop_assert_eq!(decrypt(sk, &a), Natural::from(m));
        prop_assert_eq!(decrypt(sk, &h_add(&a, &b, n).unwrap()), Natural::from((m as u64 + m2 as u64) % p));
        prop_assert_eq!(decrypt(sk, &h_mul(&a, &b, ek).unwrap()), Natural::from(m as u64 * m2 as u64 % p));
        prop_assert_eq!(decrypt(sk, &h_mul_plain(&a, &s.into(), n).unwrap()), Natural::from(m as u64 * s as u64 % p));
    }
}
