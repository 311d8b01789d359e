//! Time-local generators `ρ̇ = Σ_k A_k ρ B_k†`, their decoherence matrices in
//! an orthonormal Hermitian basis, and the diagonal (canonical) Lindblad form.

mod basis;

pub use basis::{gell_mann_basis, OperatorBasis};

use alloc::vec::Vec;

use crate::math::sqrt;
use crate::matcore::{herm_eig, psd_check, ComplexMatrix, PsdVerdict, C64};
use crate::superop::Superoperator;
use crate::{Error, Result};

/// Generator snapshot `ρ̇ = Σ_k A_k ρ B_k†`, stored as `(A_k, B_k)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    dim: usize,
    terms: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl GeneratorSpec {
    /// Checks shapes and that the generator maps Hermitian operators to
    /// Hermitian operators (within `1e-10` relative to its largest entry).
    pub fn new(dim: usize, terms: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("generator dimension must be positive"));
        }
        for (a, b) in &terms {
            for m in [a, b] {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
                }
            }
        }
        let spec = Self { dim, terms };
        let s = spec.superoperator();
        let deviation = s.hermiticity_preservation_deviation();
        if deviation > 1e-10 * s.mat().max_abs().max(1.0) {
            return Err(Error::NotHermiticityPreserving { deviation });
        }
        Ok(spec)
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    /// `-i[H, ρ] + Σ_j γ_j (L_j ρ L_j† - ½{L_j† L_j, ρ})`.
    pub fn lindblad(dim: usize, hamiltonian: Option<&ComplexMatrix>, channels: &[(f64, ComplexMatrix)]) -> Result<Self> {
        let one = ComplexMatrix::identity(dim);
        let mut terms = Vec::with_capacity(2 + 3 * channels.len());
        if let Some(h) = hamiltonian {
            let mih = h.scale(C64::new(0.0, -1.0));
            terms.push((mih.clone(), one.clone()));
            terms.push((one.clone(), mih));
        }
        for (rate, l) in channels {
            let ldl = (&l.adjoint() * l).scale_real(-0.5 * rate);
            terms.push((l.scale_real(*rate), l.clone()));
            terms.push((ldl.clone(), one.clone()));
            terms.push((one.clone(), ldl));
        }
        Self::new(dim, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.terms
    }

    /// `Σ_k conj(B_k) ⊗ A_k`.
    pub fn superoperator(&self) -> Superoperator {
        let n = self.dim * self.dim;
        let mut mat = ComplexMatrix::zeros(n, n);
        for (a, b) in &self.terms {
            mat = &mat + &b.conj().kron(a);
        }
        Superoperator::new(self.dim, mat).expect("shapes checked at construction")
    }
}

/// `max_kl |Tr L(|k><l|)|`; zero for a trace-preserving generator.
pub fn generator_trace_deviation(s: &Superoperator) -> f64 {
    let d = s.dim();
    let m = s.mat();
    let mut dev: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let tr: C64 = (0..d).map(|i| m[(i + i * d, k + l * d)]).sum();
            dev = dev.max(tr.norm());
        }
    }
    dev
}

/// Hermitian decoherence matrix `d_pq`, `p, q >= 1`.
#[derive(Debug, Clone)]
pub struct DecoherenceMatrix {
    pub mat: ComplexMatrix,
    pub basis: OperatorBasis,
    pub time: Option<f64>,
}

impl DecoherenceMatrix {
    pub fn dim_basis(&self) -> usize {
        self.mat.rows()
    }
}

/// Full coefficient matrix `c_pq = Σ_k Tr[G_p A_k] Tr[G_q B_k†]`, `p, q >= 0`.
pub fn coefficient_matrix(g: &GeneratorSpec, basis: &OperatorBasis) -> Result<ComplexMatrix> {
    if basis.dim() != g.dim {
        return Err(Error::DimensionMismatch { expected: g.dim, found: basis.dim() });
    }
    let n = basis.len();
    let mut c = ComplexMatrix::zeros(n, n);
    for (a, b) in &g.terms {
        let bd = b.adjoint();
        // Tr[G A] = <G, A>_HS since G is Hermitian
        let ta: Vec<C64> = basis.elements().iter().map(|gp| gp.hs_inner(a)).collect();
        let tb: Vec<C64> = basis.elements().iter().map(|gq| gq.hs_inner(&bd)).collect();
        for p in 0..n {
            if ta[p] == C64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..n {
                c[(p, q)] += ta[p] * tb[q];
            }
        }
    }
    Ok(c)
}

/// Coefficients of a raw superoperator in the expansion
/// `S = Σ_pq c_pq (G_qᵀ ⊗ G_p)`, i.e. `S(ρ) = Σ_pq c_pq G_p ρ G_q`.
pub fn coefficient_matrix_from_superop(s: &Superoperator, basis: &OperatorBasis) -> Result<ComplexMatrix> {
    let d = s.dim();
    if basis.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis.dim() });
    }
    let m = s.mat();
    let n = basis.len();
    let mut c = ComplexMatrix::zeros(n, n);
    let mut partial = ComplexMatrix::zeros(d, d);
    for (p, gp) in basis.elements().iter().enumerate() {
        // partial[b][e] = Σ_ac conj(G_p[a][c]) S[a + b d, c + e d]
        for b in 0..d {
            for e in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..d {
                    for cc in 0..d {
                        acc += gp[(a, cc)].conj() * m[(a + b * d, cc + e * d)];
                    }
                }
                partial[(b, e)] = acc;
            }
        }
        for (q, gq) in basis.elements().iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..d {
                for e in 0..d {
                    acc += gq[(e, b)].conj() * partial[(b, e)];
                }
            }
            c[(p, q)] = acc;
        }
    }
    Ok(c)
}

fn decoherence_block(c: &ComplexMatrix, basis: OperatorBasis) -> DecoherenceMatrix {
    let n = c.rows();
    let mat = ComplexMatrix::from_fn(n - 1, n - 1, |p, q| c[(p + 1, q + 1)]).hermitize();
    DecoherenceMatrix { mat, basis, time: None }
}

/// Decoherence matrix of a generator in `basis`.
pub fn decoherence_matrix(g: &GeneratorSpec, basis: &OperatorBasis) -> Result<DecoherenceMatrix> {
    Ok(decoherence_block(&coefficient_matrix(g, basis)?, basis.clone()))
}

/// Decoherence matrix read off a raw generator superoperator.
pub fn decoherence_matrix_from_superop(s: &Superoperator, basis: &OperatorBasis) -> Result<DecoherenceMatrix> {
    Ok(decoherence_block(&coefficient_matrix_from_superop(s, basis)?, basis.clone()))
}

/// `ρ̇ = -i[H', ρ] + Σ_p γ_p (L_p ρ L_p† - ½{L_p† L_p, ρ})`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub hamiltonian: ComplexMatrix,
    /// Ascending.
    pub rates: Vec<f64>,
    pub lindblad_ops: Vec<ComplexMatrix>,
}

impl CanonicalForm {
    pub fn superoperator(&self) -> Result<Superoperator> {
        let channels: Vec<(f64, ComplexMatrix)> =
            self.rates.iter().copied().zip(self.lindblad_ops.iter().cloned()).collect();
        Ok(GeneratorSpec::lindblad(self.hamiltonian.rows(), Some(&self.hamiltonian), &channels)?.superoperator())
    }

    pub fn min_rate(&self) -> f64 {
        self.rates.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Canonical form in the Gell-Mann basis.
pub fn canonical_form(g: &GeneratorSpec) -> Result<CanonicalForm> {
    canonical_form_in_basis(g, &gell_mann_basis(g.dim)?)
}

/// Canonical form relative to an arbitrary orthonormal Hermitian basis.
///
/// Rates are the eigenvalues of the decoherence matrix `d = U diag(γ) U†`,
/// `L_p = Σ_q U_qp G_q`. The `G_0` row and column of the coefficient matrix
/// form `F = Σ_p c_p0 G_p/√k + c_00/(2k)` with `F ρ + ρ F† = {K, ρ} - i[H', ρ]`,
/// so `H' = i(F - F†)/2`. Requires a trace-preserving generator.
pub fn canonical_form_in_basis(g: &GeneratorSpec, basis: &OperatorBasis) -> Result<CanonicalForm> {
    let k = g.dim;
    let s = g.superoperator();
    let deviation = generator_trace_deviation(&s);
    if deviation > 1e-10 * s.mat().max_abs().max(1.0) {
        return Err(Error::NotTracePreserving { deviation });
    }
    let c = coefficient_matrix(g, basis)?;
    let d = decoherence_block(&c, basis.clone());
    let eig = herm_eig(&d.mat)?;

    let gs = basis.elements();
    let lindblad_ops = (0..gs.len() - 1)
        .map(|p| {
            gs[1..].iter().enumerate().fold(ComplexMatrix::zeros(k, k), |acc, (q, gq)| {
                &acc + &gq.scale(eig.vectors[(q, p)])
            })
        })
        .collect();

    let inv_sqrt = 1.0 / sqrt(k as f64);
    let mut f = ComplexMatrix::identity(k).scale(c[(0, 0)] * (0.5 / k as f64));
    for (p, gp) in gs.iter().enumerate().skip(1) {
        f = &f + &gp.scale(c[(p, 0)] * inv_sqrt);
    }
    let hamiltonian = (&f - &f.adjoint()).scale(C64::new(0.0, 0.5)).hermitize();

    Ok(CanonicalForm { hamiltonian, rates: eig.values, lindblad_ops })
}

/// PSD test of the Gell-Mann decoherence matrix; equivalent to `γ_p >= 0`.
pub fn is_divisible_generator(g: &GeneratorSpec, tol: f64) -> Result<PsdVerdict> {
    psd_check(&decoherence_matrix(g, &gell_mann_basis(g.dim)?)?.mat, tol)
}
