//! Wall-clock scaling of the decoder. Kept to a single test so nothing else
//! in this binary competes for the CPU while timing.

use bimodal_hs::eval::{loglog_slope, scaling_study, MRule, ScalingConfig};
use bimodal_hs::instance::Mode;

#[test]
fn decoder_scaling_shapes() {
    let cfg = ScalingConfig::new(Mode::Proper, vec![16, 32, 64], MRule::TimesAmbient(10));
    let rows = scaling_study(&cfg).unwrap();
    for w in rows.windows(2) {
        let ratio = w[1].decoder_ms / w[0].decoder_ms;
        assert!(ratio <= 10.0, "n {} -> {}: ratio {ratio:.2}", w[0].n, w[1].n);
    }

    let ns = vec![16usize, 32, 64, 128];
    let cfg = ScalingConfig::new(Mode::Proper, ns.clone(), MRule::Fixed(4000));
    let rows = scaling_study(&cfg).unwrap();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r.decoder_ms).collect();
    let slope = loglog_slope(&xs, &ts).unwrap();
    assert!((1.6..=2.6).contains(&slope), "slope {slope:.3}, ms {ts:?}");
}
