use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::error::Result;
use crate::modulation::ModulationScheme;
use crate::qubo::QuboMatrix;
use crate::signal::{ComplexSample, PowerLevel};

/// Expands `|y - sqrt(P) sum_k h_k c_k(q)|^2` into QUBO form, keeping the
/// constant term as the offset.
///
/// With each symbol affine in its qubits the residual is `A - sum_m w_m q_m`
/// where `A = y - sqrt(P) sum_k h_k alpha_k` and `w_m = sqrt(P) h_k beta_m`.
/// Using `q_m^2 = q_m`:
///
/// ```text
/// |A|^2 + sum_m (|w_m|^2 - 2 Re(conj(A) w_m)) q_m + sum_{m<n} 2 Re(w_m conj(w_n)) q_m q_n
/// ```
pub fn build_qubo_generic(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
) -> Result<QuboMatrix> {
    let map = scheme.affine_map();
    let amp = p_tx.amplitude();
    let gains: Vec<Complex64> = channel.gains().iter().map(|h| h.value()).collect();

    let anchor = gains
        .iter()
        .fold(y.value(), |acc, &h| acc - amp * h * map.offset);
    let weights: Vec<Complex64> = gains
        .iter()
        .flat_map(|&h| map.weights.iter().map(move |&b| amp * h * b))
        .collect();

    let m = weights.len();
    let mut qubo = QuboMatrix::new(m);
    for (a, &wa) in weights.iter().enumerate() {
        qubo.add(a, a, wa.norm_sqr() - 2.0 * (anchor.conj() * wa).re)?;
        for (b, &wb) in weights.iter().enumerate().skip(a + 1) {
            qubo.add(a, b, 2.0 * (wa * wb.conj()).re)?;
        }
    }
    qubo.set_offset(anchor.norm_sqr())?;
    Ok(qubo)
}
