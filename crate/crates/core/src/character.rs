//! Dirichlet characters in Conrey labelling.
//!
//! The character `χ_q(m, ·)` is built from discrete logarithms on each
//! prime-power component of `(Z/qZ)^*`. Values are stored exactly as
//! exponents `k(n)` with `χ(n) = e(k(n)/D)`, so powers `χ(n)^k` carry no
//! rounding beyond the final `exp`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::primes::{factorize, gcd};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    denominator: u64,
    /// `None` on residues sharing a factor with the modulus.
    exponents: Vec<Option<u64>>,
    conductor: u64,
    parity: Parity,
}

/// Discrete-log data of one prime-power component.
struct Component {
    modulus: u64,
    /// Orders of the cyclic factors (one for odd p, up to two for 2^e).
    orders: Vec<u64>,
    /// `logs[r]` = exponent vector of residue `r` modulo `modulus`.
    logs: Vec<Option<Vec<u64>>>,
}

impl Component {
    fn new(p: u64, e: u32) -> Self {
        let modulus = p.pow(e);
        let mut logs = vec![None; modulus as usize];
        if p == 2 {
            match e {
                1 => {
                    logs[1] = Some(vec![]);
                    return Self { modulus, orders: vec![], logs };
                }
                2 => {
                    logs[1] = Some(vec![0]);
                    logs[3] = Some(vec![1]);
                    return Self { modulus, orders: vec![2], logs };
                }
                _ => {
                    // n = (-1)^alpha 5^a
                    let half = modulus / 4;
                    let mut five = 1u64;
                    for a in 0..half {
                        logs[five as usize] = Some(vec![0, a]);
                        logs[(modulus - five) as usize] = Some(vec![1, a]);
                        five = five * 5 % modulus;
                    }
                    return Self { modulus, orders: vec![2, half], logs };
                }
            }
        }
        let phi = modulus / p * (p - 1);
        let g = primitive_root(modulus, phi);
        let mut x = 1u64;
        for i in 0..phi {
            logs[x as usize] = Some(vec![i]);
            x = x * g % modulus;
        }
        Self { modulus, orders: vec![phi], logs }
    }
}

fn multiplicative_order(g: u64, modulus: u64) -> u64 {
    let mut x = g % modulus;
    let mut k = 1;
    while x != 1 {
        x = x * g % modulus;
        k += 1;
    }
    k
}

fn primitive_root(modulus: u64, phi: u64) -> u64 {
    (2..modulus).find(|&g| gcd(g, modulus) == 1 && multiplicative_order(g, modulus) == phi).unwrap_or(1)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl DirichletCharacter {
    /// The Conrey character `χ_q(m, ·)`; `m` must be a unit modulo `q`.
    pub fn conrey(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let index = index % modulus.max(1);
        let index = if modulus == 1 { 1 } else { index };
        if modulus > 1 && gcd(index, modulus) != 1 {
            return Err(Error::InvalidArgument(format!("Conrey index {index} is not a unit modulo {modulus}")));
        }
        let components: Vec<Component> = factorize(modulus).into_iter().map(|(p, e)| Component::new(p, e)).collect();
        let denominator = components.iter().flat_map(|c| c.orders.iter().copied()).fold(1, lcm);

        let m_logs: Vec<Vec<u64>> = components.iter().map(|c| c.logs[(index % c.modulus) as usize].clone().expect("unit")).collect();

        let exponents: Vec<Option<u64>> = (0..modulus)
            .map(|n| {
                if gcd(n, modulus) != 1 {
                    return None;
                }
                let mut k = 0u64;
                for (c, ml) in components.iter().zip(&m_logs) {
                    let nl = c.logs[(n % c.modulus) as usize].as_ref().expect("unit");
                    for ((&order, &a), &b) in c.orders.iter().zip(nl).zip(ml) {
                        k = (k + a * b % order * (denominator / order)) % denominator;
                    }
                }
                Some(k)
            })
            .collect();
        let exponents = if modulus == 1 { vec![Some(0)] } else { exponents };

        let mut chi = Self { modulus, index, denominator, exponents, conductor: modulus, parity: Parity::Even };
        chi.parity = if modulus <= 2 || chi.exponents[(modulus - 1) as usize] == Some(0) { Parity::Even } else { Parity::Odd };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    /// All `φ(q)` characters modulo `q`, ordered by Conrey index.
    pub fn all(modulus: u64) -> Vec<Self> {
        (1..=modulus.max(1))
            .filter(|&m| modulus == 1 || gcd(m, modulus) == 1)
            .filter(|&m| m < modulus || modulus == 1)
            .map(|m| Self::conrey(modulus, m).expect("unit index"))
            .collect()
    }

    /// The primitive characters modulo `q`.
    pub fn primitive(modulus: u64) -> Vec<Self> {
        Self::all(modulus).into_iter().filter(|c| c.is_primitive()).collect()
    }

    fn compute_conductor(&self) -> u64 {
        let q = self.modulus;
        let mut divisors: Vec<u64> = (1..=q).filter(|d| q.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            let trivial_on_kernel = (1..q).filter(|&n| n % d == 1 % d && gcd(n, q) == 1).all(|n| self.exponents[n as usize] == Some(0));
            if trivial_on_kernel {
                return d;
            }
        }
        q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conrey_index(&self) -> u64 {
        self.index
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Smallest `N` with `χ^N` principal.
    pub fn order(&self) -> u64 {
        let g = self.exponents.iter().flatten().fold(self.denominator, |g, &k| gcd(g, k));
        self.denominator / g
    }

    /// Exponent `k` with `χ(n) = e(k / D)` where `D = self.denominator()`, or `None` if `χ(n) = 0`.
    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.exponents[(n % self.modulus) as usize]
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.power(n, 1)
    }

    /// `χ(n)^k`, computed from the exact exponent.
    pub fn power(&self, n: u64, k: u64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => {
                let r = (e * (k % self.denominator)) % self.denominator;
                unit_root(r, self.denominator)
            }
        }
    }

    /// Values `χ(0), …, χ(q-1)`.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.modulus).map(|n| self.value(n)).collect()
    }

    /// The complex conjugate character.
    pub fn conj(&self) -> Self {
        let q = self.modulus;
        if q == 1 {
            return self.clone();
        }
        let inv = (1..q).find(|&x| x * self.index % q == 1).expect("unit index");
        Self::conrey(q, inv).expect("inverse is a unit")
    }

    /// Whether all nonzero values are real (order ≤ 2).
    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn label(&self) -> String {
        format!("chi_{}.{}", self.modulus, self.index)
    }
}

/// `e(r/d) = exp(2πi r/d)` with exact values at quarter turns.
pub fn unit_root(r: u64, d: u64) -> Complex64 {
    let r = r % d;
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if (4 * r).is_multiple_of(d) {
        return match 4 * r / d {
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = TAU * r as f64 / d as f64;
    Complex64::new(theta.cos(), theta.sin())
}
