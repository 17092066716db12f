//! Cross-checks against straight-line reimplementations in machine integers.

use fragfhe::homomorphic::{h_add, h_mul};
use fragfhe::numeric::{gen_prime, is_probable_prime, seeded_rng, MR_ROUNDS};
use fragfhe::scheme::{decrypt, decrypt_fragments, encrypt, keygen, Params};
use fragfhe::Natural;
use num_traits::{One, ToPrimitive};
use rand::Rng;

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse in a prime field via Fermat.
fn inv_p(a: u128, p: u128) -> u128 {
    pow_mod(a, p - 2, p)
}

fn small(v: &Natural) -> u128 {
    v.to_u128().expect("fits in u128")
}

/// `k^(sum c_i e_i) mod p` computed by repeated multiplication by `k` or `k^-1`.
fn signed_pow(k: u128, coeffs: [i64; 3], e: [u128; 3], p: u128) -> u128 {
    let (mut pos, mut neg) = (0u128, 0u128);
    for (c, ei) in coeffs.iter().zip(e) {
        let term = c.unsigned_abs() as u128 * ei;
        if *c >= 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    pow_mod(k, pos, p) * pow_mod(inv_p(k % p, p), neg, p) % p
}

fn mr_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let n = n as u128;
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u128, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let mut x = pow_mod(a, d, n);
        if x == 0 || x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn fermat_big(n: &Natural, bases: &[u32]) -> bool {
    let e = n - 1u32;
    bases.iter().all(|&b| Natural::from(b).modpow(&e, n).is_one())
}

#[test]
fn primality_matches_u64_oracle() {
    let mut rng = seeded_rng(1);
    for _ in 0..20_000 {
        let n: u64 = rng.gen::<u64>() | 1;
        assert_eq!(is_probable_prime(&Natural::from(n), 4, &mut rng), mr_u64(n), "{n}");
    }
    for n in [2u64.pow(61) - 1, 18446744073709551557, 3215031751, 2152302898747, 3474749660383] {
        assert_eq!(is_probable_prime(&Natural::from(n), 4, &mut rng), mr_u64(n), "{n}");
    }
}

#[test]
fn primality_on_large_known_values() {
    let mut rng = seeded_rng(2);
    let m521 = (Natural::one() << 521) - 1u32;
    let m607 = (Natural::one() << 607) - 1u32;
    assert!(is_probable_prime(&m521, MR_ROUNDS, &mut rng));
    assert!(is_probable_prime(&m607, MR_ROUNDS, &mut rng));
    assert!(!is_probable_prime(&((Natural::one() << 523) - 1u32), MR_ROUNDS, &mut rng));
    assert!(!is_probable_prime(&(&m521 * &m607), MR_ROUNDS, &mut rng));
}

#[test]
fn generated_512_bit_primes_pass_independent_fermat() {
    let mut rng = seeded_rng(3);
    for _ in 0..4 {
        let p = gen_prime(512, &mut rng).unwrap();
        assert_eq!(p.bits(), 512);
        assert!(fermat_big(&p, &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]));
        let q = gen_prime(256, &mut rng).unwrap();
        assert!(!is_probable_prime(&(&p * &q), MR_ROUNDS, &mut rng));
    }
}

const EXPONENTS: [[i64; 3]; 6] = [[-2, 1, 0], [0, -2, 1], [1, 0, -2], [-1, -1, 1], [-1, 1, -1], [1, -1, -1]];

#[test]
fn keygen_matches_straight_line_oracle() {
    let params = Params::toy(8, 11u32.into(), 13u32.into()).unwrap();
    let p = 11u128;
    let mut rng = seeded_rng(4);
    for _ in 0..300 {
        let (sk, ek) = keygen(&params, &mut rng).unwrap();
        let w = sk.witnesses().unwrap();
        let k = small(&w.k);
        let e = w.e.clone().map(|x| small(&x));
        let a = w.a.clone().map(|x| small(&x));
        let b = w.b.clone().map(|x| small(&x));

        assert_eq!(b[3], a[1] * b[1] % p * inv_p(a[0], p) % p);
        assert_eq!(b[4], a[0] * b[0] % p * inv_p(a[2], p) % p);
        assert_eq!(b[5], a[2] * b[2] % p * inv_p(a[1], p) % p);

        for i in 0..3 {
            let ki = small(&sk.position_keys()[i]);
            assert_eq!(ki % p, a[i] * pow_mod(k, e[i], p) % p);
            assert_eq!(small(&sk.inverses()[i]), inv_p(ki % p, p));
        }
        for (i, coeffs) in EXPONENTS.iter().enumerate() {
            assert_eq!(small(&ek.t()[i]) % p, b[i] * signed_pow(k, *coeffs, e, p) % p, "t{}", i + 1);
        }
        let d = ek.d().clone().map(|x| small(&x) % p);
        assert_eq!(d[0], a[0] * inv_p(a[2] * a[2] % p * b[2] % p, p) % p);
        assert_eq!(d[1], a[1] * inv_p(a[0] * a[0] % p * b[0] % p, p) % p);
        assert_eq!(d[2], a[2] * inv_p(a[1] * a[1] % p * b[1] % p, p) % p);
    }
}

#[test]
fn multiplication_matches_straight_line_formula() {
    let params = Params::toy(8, 11u32.into(), 13u32.into()).unwrap();
    let n = 143u128;
    let mut rng = seeded_rng(5);
    for _ in 0..200 {
        let (sk, ek) = keygen(&params, &mut rng).unwrap();
        let t = ek.t().clone().map(|x| small(&x));
        let d = ek.d().clone().map(|x| small(&x));
        let m: u32 = rng.gen_range(0..11);
        let m2: u32 = rng.gen_range(0..11);
        let x = encrypt(&sk, &params, &m.into(), &mut rng).unwrap();
        let y = encrypt(&sk, &params, &m2.into(), &mut rng).unwrap();
        let c = x.components().clone().map(|v| small(&v));
        let cp = y.components().clone().map(|v| small(&v));
        let expected = [
            (c[2] * cp[2] * t[2] + (c[1] * cp[2] + c[2] * cp[1]) * t[5]) % n * d[0] % n,
            (c[0] * cp[0] * t[0] + (c[0] * cp[2] + c[2] * cp[0]) * t[4]) % n * d[1] % n,
            (c[1] * cp[1] * t[1] + (c[0] * cp[1] + c[1] * cp[0]) * t[3]) % n * d[2] % n,
        ];
        let prod = h_mul(&x, &y, &ek).unwrap();
        assert_eq!(prod.components().clone().map(|v| small(&v)), expected);
        assert_eq!(decrypt(&sk, &prod), Natural::from(m * m2 % 11));
    }
}

#[test]
fn ring_laws_exhaustive_at_p_11() {
    let params = Params::toy(8, 11u32.into(), 13u32.into()).unwrap();
    let mut rng = seeded_rng(6);
    let (sk, ek) = keygen(&params, &mut rng).unwrap();
    let n = params.n();
    let enc: Vec<_> = (0u32..11).map(|m| encrypt(&sk, &params, &m.into(), &mut rng).unwrap()).collect();
    for a in 0..11 {
        for b in 0..11 {
            let ab = h_mul(&enc[a], &enc[b], &ek).unwrap();
            assert_eq!(decrypt(&sk, &ab), decrypt(&sk, &h_mul(&enc[b], &enc[a], &ek).unwrap()));
            for c in 0..11 {
                let lhs = h_mul(&enc[a], &h_add(&enc[b], &enc[c], n).unwrap(), &ek).unwrap();
                let rhs = h_add(&ab, &h_mul(&enc[a], &enc[c], &ek).unwrap(), n).unwrap();
                let expected = Natural::from((a * (b + c) % 11) as u32);
                assert_eq!(decrypt(&sk, &lhs), expected);
                assert_eq!(decrypt(&sk, &rhs), expected);
                let assoc = h_mul(&ab, &enc[c], &ek).unwrap();
                assert_eq!(decrypt(&sk, &assoc), Natural::from((a * b * c % 11) as u32));
            }
        }
    }
}

#[test]
fn fragment_sum_survives_chained_products() {
    let params = Params::toy(16, 10007u32.into(), 10009u32.into()).unwrap();
    let p = params.p();
    let mut rng = seeded_rng(7);
    let (sk, ek) = keygen(&params, &mut rng).unwrap();
    let mut expected = Natural::from(3u8);
    let mut acc = encrypt(&sk, &params, &expected, &mut rng).unwrap();
    for step in 0..10u32 {
        let m = Natural::from(step + 2);
        acc = h_mul(&acc, &encrypt(&sk, &params, &m, &mut rng).unwrap(), &ek).unwrap();
        expected = expected * m % p;
        assert_eq!(decrypt_fragments(&sk, &acc).sum_mod(p), expected);
        assert_eq!(acc.depth(), step + 1);
    }
}
