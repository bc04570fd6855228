//! Closed-form coefficient families for BPSK, QPSK and 16-QAM.
//!
//! Indices below are 0-based. User `i` owns qubits `i` (BPSK), `2i, 2i+1`
//! (QPSK, in-phase first) or `4i .. 4i+3` (16-QAM: two in-phase qubits,
//! then two quadrature qubits, most significant first). For each user,
//! `sr`/`si` are the sums of the real/imaginary parts of all *other* users'
//! gains. Constants are dropped, so the offset is always zero.

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::modulation::{ModulationKind, ModulationScheme};
use crate::qubo::QuboMatrix;
use crate::signal::{ComplexSample, PowerLevel};

struct Parts {
    hr: Vec<f64>,
    hi: Vec<f64>,
    sum_r: f64,
    sum_i: f64,
    yr: f64,
    yi: f64,
    p: f64,
}

impl Parts {
    fn new(y: ComplexSample, channel: &ChannelRealization, p_tx: PowerLevel) -> Self {
        let hr: Vec<f64> = channel.gains().iter().map(|h| h.re()).collect();
        let hi: Vec<f64> = channel.gains().iter().map(|h| h.im()).collect();
        Self {
            sum_r: hr.iter().sum(),
            sum_i: hi.iter().sum(),
            hr,
            hi,
            yr: y.re(),
            yi: y.im(),
            p: p_tx.linear_mw(),
        }
    }

    fn n(&self) -> usize {
        self.hr.len()
    }

    /// Sums over the other users.
    fn others(&self, i: usize) -> (f64, f64) {
        (self.sum_r - self.hr[i], self.sum_i - self.hi[i])
    }

    /// `h_iR h_jR + h_iI h_jI`
    fn dot(&self, i: usize, j: usize) -> f64 {
        self.hr[i] * self.hr[j] + self.hi[i] * self.hi[j]
    }
}

pub fn build_qubo_bpsk(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
) -> Result<QuboMatrix> {
    let c = Parts::new(y, channel, p_tx);
    let (p, sqrt_p) = (c.p, c.p.sqrt());
    let mut q = QuboMatrix::new(c.n());
    for i in 0..c.n() {
        let (hr, hi) = (c.hr[i], c.hi[i]);
        let (sr, si) = c.others(i);
        let bias =
            p * (-4.0 * hr * sr - 4.0 * hi * si) - sqrt_p * (4.0 * c.yr * hr + 4.0 * c.yi * hi);
        q.add(i, i, bias)?;
        for j in i + 1..c.n() {
            q.add(
                i,
                j,
                p * (8.0 * c.hr[i] * c.hr[j] + 8.0 * c.hi[i] * c.hi[j]),
            )?;
        }
    }
    Ok(q)
}

pub fn build_qubo_qpsk(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
) -> Result<QuboMatrix> {
    let c = Parts::new(y, channel, p_tx);
    let half_p = c.p / 2.0;
    let sqrt_2p = (2.0 * c.p).sqrt();
    let mut q = QuboMatrix::new(2 * c.n());
    for i in 0..c.n() {
        let (hr, hi) = (c.hr[i], c.hi[i]);
        let (sr, si) = c.others(i);
        let (re_q, im_q) = (2 * i, 2 * i + 1);

        let re_bias = half_p * (-4.0 * hr * (sr - si) - 4.0 * hi * (sr + si))
            - sqrt_2p * (2.0 * c.yr * hr + 2.0 * c.yi * hi);
        let im_bias = half_p * (-4.0 * hr * (sr + si) - 4.0 * hi * (-sr + si))
            - sqrt_2p * (-2.0 * c.yr * hi + 2.0 * c.yi * hr);
        q.add(re_q, re_q, re_bias)?;
        q.add(im_q, im_q, im_bias)?;
        // The two qubits of one symbol never couple.

        for j in i + 1..c.n() {
            let same_axis = half_p * 8.0 * c.dot(i, j);
            q.add(re_q, 2 * j, same_axis)?;
            q.add(im_q, 2 * j + 1, same_axis)?;
            q.add(
                re_q,
                2 * j + 1,
                half_p * (8.0 * c.hi[i] * c.hr[j] - 8.0 * c.hr[i] * c.hi[j]),
            )?;
            q.add(
                im_q,
                2 * j,
                half_p * (-8.0 * c.hi[i] * c.hr[j] + 8.0 * c.hr[i] * c.hi[j]),
            )?;
        }
    }
    Ok(q)
}

pub fn build_qubo_qam16(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
) -> Result<QuboMatrix> {
    let c = Parts::new(y, channel, p_tx);
    let ninth_p = c.p / 9.0;
    let y_scale = (2.0 * c.p).sqrt() / 3.0;
    let mut q = QuboMatrix::new(4 * c.n());
    for i in 0..c.n() {
        let (hr, hi) = (c.hr[i], c.hi[i]);
        let (sr, si) = c.others(i);
        // in-phase msb/lsb, quadrature msb/lsb
        let [r1, r2, i1, i2] = [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3];

        let bias = |w: f64, re_mix: f64, im_mix: f64| {
            ninth_p * (-4.0 * hr * (hr + w * re_mix) - 4.0 * hi * (hi + w * im_mix))
        };
        q.add(
            r1,
            r1,
            bias(3.0, sr - si, sr + si) - y_scale * (4.0 * c.yr * hr + 4.0 * c.yi * hi),
        )?;
        q.add(
            r2,
            r2,
            bias(1.5, sr - si, sr + si) - y_scale * (2.0 * c.yr * hr + 2.0 * c.yi * hi),
        )?;
        q.add(
            i1,
            i1,
            bias(3.0, sr + si, -sr + si) - y_scale * (-4.0 * c.yr * hi + 4.0 * c.yi * hr),
        )?;
        q.add(
            i2,
            i2,
            bias(1.5, sr + si, -sr + si) - y_scale * (-2.0 * c.yr * hi + 2.0 * c.yi * hr),
        )?;

        // In-phase and quadrature qubits of one symbol never couple.
        let intra = 8.0 * c.p / 9.0 * (hr * hr + hi * hi);
        q.add(r1, r2, intra)?;
        q.add(i1, i2, intra)?;

        for j in i + 1..c.n() {
            let [s1, s2, t1, t2] = [4 * j, 4 * j + 1, 4 * j + 2, 4 * j + 3];
            let dot = c.dot(i, j);
            // h_iI h_jR - h_iR h_jI
            let cross = c.hi[i] * c.hr[j] - c.hr[i] * c.hi[j];

            let mixed_weight = ninth_p * 8.0 * dot;
            q.add(r1, s2, mixed_weight)?;
            q.add(r2, s1, mixed_weight)?;
            q.add(i2, t1, mixed_weight)?;
            q.add(i1, t2, mixed_weight)?;

            q.add(r2, s2, ninth_p * 4.0 * dot)?;
            q.add(i2, t2, ninth_p * 4.0 * dot)?;
            q.add(i1, t1, ninth_p * 16.0 * dot)?;
            q.add(r1, s1, ninth_p * 16.0 * dot)?;

            let v = 8.0 * c.p / 9.0 * (-c.hr[i] * c.hi[j] + c.hi[i] * c.hr[j]);
            q.add(r2, t1, v)?;
            q.add(r1, t2, v)?;

            let v = ninth_p * (-8.0 * c.hi[i] * c.hr[j] + 8.0 * c.hr[i] * c.hi[j]);
            q.add(i1, s2, v)?;
            q.add(i2, s1, v)?;

            q.add(
                r2,
                t2,
                ninth_p * (-4.0 * c.hr[i] * c.hi[j] + 4.0 * c.hi[i] * c.hr[j]),
            )?;
            q.add(
                i2,
                s2,
                ninth_p * (-4.0 * c.hi[i] * c.hr[j] + 4.0 * c.hr[i] * c.hi[j]),
            )?;
            q.add(
                i1,
                s1,
                ninth_p * (-16.0 * c.hi[i] * c.hr[j] + 16.0 * c.hr[i] * c.hi[j]),
            )?;
            q.add(r1, t1, ninth_p * 16.0 * cross)?;
        }
    }
    Ok(q)
}

/// Dispatches to the closed-form builder of `scheme`. 64-QAM has none.
pub fn build_qubo_closed_form(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
) -> Result<QuboMatrix> {
    match scheme.kind() {
        ModulationKind::Bpsk => build_qubo_bpsk(y, channel, p_tx),
        ModulationKind::Qpsk => build_qubo_qpsk(y, channel, p_tx),
        ModulationKind::Qam16 => build_qubo_qam16(y, channel, p_tx),
        ModulationKind::Qam64 => Err(Error::NoClosedForm("qam64")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{place_users, sample_channel, superimpose};
    use crate::modulation::random_symbols;
    use crate::qubo::{build_qubo_generic, max_relative_deviation};
    use crate::signal::{dbm_to_linear, sample_circular_gaussian, RandomStream};
    use rand::Rng;

    fn mw(p: f64) -> PowerLevel {
        PowerLevel::from_mw(p).unwrap()
    }

    fn real_channel(gains: &[f64]) -> ChannelRealization {
        ChannelRealization::from_gains(gains.iter().map(|&g| ComplexSample::real(g)).collect())
            .unwrap()
    }

    #[test]
    fn bpsk_examples() {
        let q = build_qubo_bpsk(ComplexSample::real(1.0), &real_channel(&[1.0]), mw(1.0)).unwrap();
        assert_eq!(q.get(0, 0), -4.0);
        assert_eq!(q.offset(), 0.0);

        let q = build_qubo_bpsk(ComplexSample::ZERO, &real_channel(&[1.0, 1.0]), mw(1.0)).unwrap();
        assert_eq!(q.get(0, 1), 8.0);
    }

    #[test]
    fn qpsk_structural_zeros() {
        let ch = ChannelRealization::from_gains(vec![ComplexSample::new(0.3, -0.8)]).unwrap();
        let q = build_qubo_qpsk(ComplexSample::new(0.2, 0.9), &ch, mw(2.5)).unwrap();
        assert!(!q.contains(0, 1));

        let q = build_qubo_qpsk(
            ComplexSample::new(0.2, 0.9),
            &real_channel(&[0.7, -0.4]),
            mw(2.5),
        )
        .unwrap();
        assert!(!q.contains(0, 3));
        assert!(!q.contains(1, 2));
        assert!(q.contains(0, 2) && q.contains(1, 3));
    }

    #[test]
    fn qam16_examples() {
        let ch = ChannelRealization::from_gains(vec![ComplexSample::new(0.3, -0.8)]).unwrap();
        let q = build_qubo_qam16(ComplexSample::new(0.1, -0.1), &ch, mw(4.0)).unwrap();
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(!q.contains(i, j), "({i},{j}) should be structurally zero");
        }

        let q = build_qubo_qam16(
            ComplexSample::new(0.1, -0.1),
            &real_channel(&[1.0]),
            mw(9.0),
        )
        .unwrap();
        assert!((q.get(0, 1) - 8.0).abs() < 1e-12);
        assert!((q.get(2, 3) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn qam64_has_no_closed_form() {
        let sch = ModulationScheme::new(ModulationKind::Qam64);
        let err = build_qubo_closed_form(ComplexSample::ZERO, &real_channel(&[1.0]), mw(1.0), &sch);
        assert!(matches!(err, Err(Error::NoClosedForm("qam64"))));
    }

    #[test]
    fn closed_forms_match_generic_expansion() {
        for kind in [
            ModulationKind::Bpsk,
            ModulationKind::Qpsk,
            ModulationKind::Qam16,
        ] {
            let sch = ModulationScheme::new(kind);
            let mut worst = 0.0f64;
            for trial in 0..1000 {
                let mut rng = RandomStream::new(77, trial).rng();
                let n = rng.random_range(1..=4usize);
                let p = mw(dbm_to_linear(rng.random_range(-40.0..24.0)));
                let ch = sample_channel(&mut rng, &place_users(n).unwrap()).unwrap();
                let s = random_symbols(&sch, n, &mut rng);
                let noise = sample_circular_gaussian(&mut rng, 1e-3).unwrap();
                let y = superimpose(&s, &ch, p, noise).unwrap();
                let closed = build_qubo_closed_form(y, &ch, p, &sch).unwrap();
                let generic = build_qubo_generic(y, &ch, p, &sch).unwrap();
                worst = worst.max(max_relative_deviation(&closed, &generic));
            }
            assert!(worst < 1e-9, "{kind}: max deviation {worst}");
        }
    }
}
