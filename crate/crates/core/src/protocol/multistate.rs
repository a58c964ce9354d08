use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor_chain, ComplexMatrix, PureState};
use crate::models::ConditionalEvolutions;

/// Probability below which a measurement branch is treated as empty: its
/// post-measurement state is not defined to useful precision. Branch
/// probabilities in this protocol are exactly `1/d^2 >= 1/16`, so this floor
/// only guards against nonsensical inputs.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-14;

fn check_dims(rho: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::NotSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    let total: usize = dims.iter().product();
    if total != rho.rows() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows(),
            actual: total,
        });
    }
    Ok(())
}

/// Strides of each subsystem inside the composite index (leftmost most
/// significant).
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Apply the pair-conditioned environment evolution
/// `U = sum_ij |i j><i j| (x) w_ij` to a state on the composite space
/// `dims`, where `sys_a`, `sys_b` are the controlling subsystems and the
/// environment is the LAST subsystem.
///
/// `U` is block diagonal in the non-environment basis, so the update runs
/// blockwise: block `(K, K')` of the state (an `e x e` submatrix) becomes
/// `w_{f(K)} block w_{f(K')}^dagger`, with `f(K)` reading the control values
/// out of the multi-index `K`. This is algebraically identical to forming
/// the dense `U` and conjugating, at a fraction of the cost.
pub fn controlled_pair_evolution(
    rho: &ComplexMatrix,
    dims: &[usize],
    sys_a: usize,
    sys_b: usize,
    evolutions: &ConditionalEvolutions,
) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    let n_sub = dims.len();
    if n_sub < 3 {
        return Err(Error::InvalidParameter {
            name: "dims",
            reason: "need two controls plus an environment".into(),
        });
    }
    let env = n_sub - 1;
    if sys_a >= env || sys_b >= env || sys_a == sys_b {
        return Err(Error::InvalidParameter {
            name: "sys_a/sys_b",
            reason: "controls must be distinct non-environment subsystems".into(),
        });
    }
    let d = evolutions.qudit_dim();
    if dims[sys_a] != d || dims[sys_b] != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: dims[sys_a],
        });
    }
    let e = evolutions.env_dim();
    if dims[env] != e {
        return Err(Error::DimensionMismatch {
            expected: e,
            actual: dims[env],
        });
    }

    // Qudit multi-indices are the composite index divided by e; recover the
    // control values of each with stride arithmetic on the qudit part.
    let qudit_dims = &dims[..env];
    let qstrides = strides(qudit_dims);
    let blocks: usize = qudit_dims.iter().product();
    let control = |k: usize, sys: usize| (k / qstrides[sys]) % qudit_dims[sys];

    let total = rho.rows();
    let mut out = ComplexMatrix::zeros(total, total);
    // Scratch for w_left * block.
    let mut tmp = vec![Complex64::ZERO; e * e];
    for kl in 0..blocks {
        let w_left = evolutions.evolution(control(kl, sys_a), control(kl, sys_b));
        for kr in 0..blocks {
            let w_right = evolutions.evolution(control(kr, sys_a), control(kr, sys_b));
            let row0 = kl * e;
            let col0 = kr * e;
            // tmp = w_left * rho_block
            for r in 0..e {
                for c in 0..e {
                    let mut acc = Complex64::ZERO;
                    for t in 0..e {
                        acc += w_left[(r, t)] * rho[(row0 + t, col0 + c)];
                    }
                    tmp[r * e + c] = acc;
                }
            }
            // out_block = tmp * w_right^dagger
            for r in 0..e {
                for c in 0..e {
                    let mut acc = Complex64::ZERO;
                    for t in 0..e {
                        acc += tmp[r * e + t] * w_right[(c, t)].conj();
                    }
                    out[(row0 + r, col0 + c)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Dense reference implementation of [`controlled_pair_evolution`]: builds
/// the full conditional unitary and conjugates. Used to cross-check the
/// blockwise path in tests; costs `O(dim^3)`.
pub fn controlled_pair_evolution_dense(
    rho: &ComplexMatrix,
    dims: &[usize],
    sys_a: usize,
    sys_b: usize,
    evolutions: &ConditionalEvolutions,
) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    let env = dims.len() - 1;
    let e = evolutions.env_dim();
    let qudit_dims = &dims[..env];
    let qstrides = strides(qudit_dims);
    let blocks: usize = qudit_dims.iter().product();
    let total = rho.rows();
    let mut u = ComplexMatrix::zeros(total, total);
    for k in 0..blocks {
        let i = (k / qstrides[sys_a]) % qudit_dims[sys_a];
        let j = (k / qstrides[sys_b]) % qudit_dims[sys_b];
        let w = evolutions.evolution(i, j);
        for r in 0..e {
            for c in 0..e {
                u[(k * e + r, k * e + c)] = w[(r, c)];
            }
        }
    }
    Ok(&(&u * rho) * &u.dagger())
}

/// Apply a unitary acting on one subsystem.
pub fn apply_local(
    rho: &ComplexMatrix,
    dims: &[usize],
    sys: usize,
    u: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_dims(rho, dims)?;
    if sys >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: sys,
            bound: dims.len(),
        });
    }
    if u.rows() != dims[sys] || u.cols() != dims[sys] {
        return Err(Error::DimensionMismatch {
            expected: dims[sys],
            actual: u.rows(),
        });
    }
    let mut factors: Vec<ComplexMatrix> = Vec::with_capacity(dims.len());
    for (pos, &d) in dims.iter().enumerate() {
        if pos == sys {
            factors.push(u.clone());
        } else {
            factors.push(ComplexMatrix::identity(d));
        }
    }
    let refs: Vec<&ComplexMatrix> = factors.iter().collect();
    let full = tensor_chain(&refs)?;
    Ok(&(&full * rho) * &full.dagger())
}

/// Project two subsystems onto a pure state of their joint space and return
/// `(weight, normalized remainder, remaining dims)`.
///
/// The weight is the Born probability `Tr[(|chi><chi| (x) I) rho]`; the
/// remainder is the state of the untouched subsystems (original order)
/// conditioned on that outcome, or `None` when the weight sits below
/// [`BRANCH_PROBABILITY_FLOOR`].
pub fn project_pair(
    rho: &ComplexMatrix,
    dims: &[usize],
    sys_a: usize,
    sys_b: usize,
    chi: &PureState,
) -> Result<(f64, Option<ComplexMatrix>, Vec<usize>)> {
    check_dims(rho, dims)?;
    if sys_a >= dims.len() || sys_b >= dims.len() || sys_a == sys_b {
        return Err(Error::InvalidParameter {
            name: "sys_a/sys_b",
            reason: "projected subsystems must be distinct and in range".into(),
        });
    }
    if chi.dim() != dims[sys_a] * dims[sys_b] {
        return Err(Error::DimensionMismatch {
            expected: dims[sys_a] * dims[sys_b],
            actual: chi.dim(),
        });
    }

    let all_strides = strides(dims);
    let remaining: Vec<usize> = (0..dims.len())
        .filter(|&s| s != sys_a && s != sys_b)
        .collect();
    let rem_dims: Vec<usize> = remaining.iter().map(|&s| dims[s]).collect();

    // Base offsets of every multi-index over the remaining subsystems, in
    // lexicographic order of the remaining dims.
    let mut rem_offsets = vec![0usize];
    for &s in &remaining {
        let mut next = Vec::with_capacity(rem_offsets.len() * dims[s]);
        for &o in &rem_offsets {
            for x in 0..dims[s] {
                next.push(o + x * all_strides[s]);
            }
        }
        rem_offsets = next;
    }
    // Offsets of the projected pair, ordered to match chi's indexing
    // (sys_a most significant).
    let mut pair_offsets = Vec::with_capacity(chi.dim());
    for x in 0..dims[sys_a] {
        for y in 0..dims[sys_b] {
            pair_offsets.push(x * all_strides[sys_a] + y * all_strides[sys_b]);
        }
    }

    let amps = chi.amplitudes();
    let nrem = rem_offsets.len();
    let mut projected = ComplexMatrix::zeros(nrem, nrem);
    for (r, &ro) in rem_offsets.iter().enumerate() {
        for (c, &co) in rem_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (p, &po) in pair_offsets.iter().enumerate() {
                let ap = amps[p].conj();
                if ap == Complex64::ZERO {
                    continue;
                }
                for (q, &qo) in pair_offsets.iter().enumerate() {
                    let aq = amps[q];
                    if aq == Complex64::ZERO {
                        continue;
                    }
                    acc += ap * aq * rho[(ro + po, co + qo)];
                }
            }
            projected[(r, c)] = acc;
        }
    }

    let weight = projected.trace();
    if weight.im.abs() > 1e-9 {
        return Err(Error::NonRealResult {
            imag: weight.im,
            context: "measurement branch weight",
        });
    }
    let p = weight.re;
    if p < BRANCH_PROBABILITY_FLOOR {
        return Ok((p.max(0.0), None, rem_dims));
    }
    let normalized = projected.scale(Complex64::new(1.0 / p, 0.0));
    Ok((p, Some(normalized), rem_dims))
}

/// Reduced state of everything but the final (environment) subsystem.
pub fn trace_out_env(rho: &ComplexMatrix, dims: &[usize]) -> Result<ComplexMatrix> {
    let keep: Vec<usize> = (0..dims.len() - 1).collect();
    partial_trace(rho, dims, &keep)
}
