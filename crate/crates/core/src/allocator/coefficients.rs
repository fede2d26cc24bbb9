//! Stationarity polynomials.
//!
//! Two families live here. The `published_*` builders transcribe the
//! coefficient blocks symbol for symbol as they were published, including
//! their inconsistencies; they are never corrected. The `*_stationarity`
//! builders are the first-order conditions of the priced objectives that
//! [`crate::rates::secrecy_rate`] actually evaluates.

use crate::allocator::poly::PolynomialCoefficients;
use crate::model::{ChannelGains, Geometry};

/// Cubic in the relay power `p_jb` John spends forwarding Alice, with its
/// `omega` block evaluated at Alice's main power `p_a`.
pub fn psi_coefficients(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
    p_a: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_ae, g_jb, g_aj) = (gains.g_ab, gains.g_ae, gains.g_jb, gains.g_aj);
    let s2 = sigma2;
    let a2 = alpha * alpha;

    let w1 = s2 * g_jb * g_jb + g_jb * g_jb * g_ab * p_a + g_jb * g_jb * g_aj * p_a;
    let w2 = (s2 * g_jb + 2.0 * g_jb * g_ab * p_a + g_aj * g_jb * p_a + s2 * g_jb) * (g_aj + s2);
    let w3 = (g_ab * p_a + s2) * (g_aj * p_a + s2).powi(2);
    let w4 = alpha * s2 + alpha * g_ae * (1.0 + lambda * p_a);
    let w5 = a2 + g_ae * lambda * p_a;
    let relay_term = g_aj * g_jb * p_a * (g_aj * p_a + s2);

    PolynomialCoefficients::cubic(
        w1 * a2 * g_ae,
        w1 * w4 + w2 * a2 * g_ae,
        w2 * w4 + w3 * a2 * g_ae - alpha * g_ae * relay_term,
        w3 * w4 - w5 * relay_term,
    )
}

/// Cubic in the relay power `p_ab` Alice spends forwarding John, with its
/// `phi` block evaluated at John's main power `p_j`.
pub fn beta_coefficients(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
    p_j: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_je, g_jb, g_aj) = (gains.g_ab, gains.g_je, gains.g_jb, gains.g_aj);
    let g_ja = gains.g_ja();
    let s2 = sigma2;

    let f1 = s2 * g_ab * g_ab + g_ab * g_ab * g_jb * p_j + g_ab * g_ab * g_ja * p_j;
    let f2 = (s2 * g_ab + 2.0 * g_ab * g_jb * p_j + g_ab * g_ja * p_j + s2 * g_ab) * (g_ja * p_j + s2);
    let f3 = (g_jb * p_j + s2) * (g_ja * p_j + s2).powi(2);
    let f4 = alpha * s2 * g_je * lambda * p_j + alpha * g_je;
    let f5 = alpha * alpha * s2 * g_ja * g_ab * g_je * lambda * p_j * p_j * (g_ja * p_j + s2);

    PolynomialCoefficients::cubic(
        g_je * f1,
        g_je * f2 + f1 * f4,
        // The published block mixes in g_aj here; kept as is.
        g_je * f3 + f2 * f4 - alpha * g_ja * g_ab * g_je * p_j * (g_aj * p_j + s2),
        f3 * f4 - f5,
    )
}

/// Quadratic for John's donated power `p_j` under power cooperation.
pub fn published_mac_alice(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_ae) = (gains.g_ab, gains.g_ae);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * alpha * alpha * g_ab * g_ae,
        lambda * (s2 * alpha * g_ab + s2 * alpha * g_ae),
        -(s2 * g_ab - s2 * g_ae - lambda * s4),
    )
}

/// Quadratic for Alice's donated power `p_a` under power cooperation.
pub fn published_mac_john(
    gains: &ChannelGains,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_jb, g_je) = (gains.g_jb, gains.g_je);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * g_je * g_jb / (alpha * alpha),
        lambda * (s2 * g_jb / alpha + s2 * g_je / alpha),
        -(s2 * g_jb - s2 * g_je - lambda * s4),
    )
}

/// Quadratic for a transmitter using its own power on Alice's link pair.
/// Serves both the one-sided main power and Alice's non-cooperative power.
pub fn published_own_power_alice(
    gains: &ChannelGains,
    sigma2: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_ae) = (gains.g_ab, gains.g_ae);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * g_ab * g_ae,
        lambda * (s2 * g_ab + s2 * g_ae),
        -(s2 * g_ab - s2 * g_ae - lambda * s4),
    )
}

/// Quadratic for John's non-cooperative power. The linear term carries
/// `g_ab` where `g_jb` belongs; transcribed unchanged.
pub fn published_own_power_john(
    gains: &ChannelGains,
    sigma2: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_jb, g_je) = (gains.g_ab, gains.g_jb, gains.g_je);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * g_jb * g_je,
        lambda * (s2 * g_ab + s2 * g_je),
        -(s2 * g_jb - s2 * g_je - lambda * s4),
    )
}

/// Distance-augmented quadratic for John's donated power `p_j`, with
/// `d^eta` in place of the squared distances (identical for `eta = 2`).
pub fn published_distance_mac_alice(
    gains: &ChannelGains,
    geometry: &Geometry,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_ab, g_ae) = (gains.g_ab, gains.g_ae);
    let d_ab = geometry.d_ab.powf(geometry.eta);
    let d_ae = geometry.d_ae.powf(geometry.eta);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * alpha * alpha * g_ab * g_ae,
        lambda * (s2 * alpha * g_ab * d_ab + s2 * alpha * g_ae * d_ae),
        -(s2 * g_ab * d_ae - s2 * g_ae * d_ab - lambda * s4 * d_ab * d_ae),
    )
}

/// Distance-augmented quadratic for Alice's donated power `p_a`.
pub fn published_distance_mac_john(
    gains: &ChannelGains,
    geometry: &Geometry,
    sigma2: f64,
    alpha: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let (g_jb, g_je) = (gains.g_jb, gains.g_je);
    let d_jb = geometry.d_jb.powf(geometry.eta);
    let d_je = geometry.d_je.powf(geometry.eta);
    let s2 = sigma2;
    let s4 = s2 * s2;
    PolynomialCoefficients::quadratic(
        lambda * g_je * g_jb / (alpha * alpha),
        lambda * (s2 * g_jb * d_je / alpha + s2 * g_je * d_jb / alpha),
        -(s2 * g_jb * d_jb - s2 * g_je * d_je - lambda * s4 * d_jb * d_je),
    )
}

/// First-order condition of
/// `ln(1 + g_b s P / sigma2) - ln(1 + g_e s P / sigma2) - lambda P`,
/// where `s` scales the decision power onto the link (1 for own power,
/// `alpha` or `1 / alpha` for donated power).
pub fn donated_power_stationarity(
    g_b: f64,
    g_e: f64,
    scale: f64,
    sigma2: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let s2 = sigma2;
    PolynomialCoefficients::quadratic(
        lambda * scale * scale * g_b * g_e,
        lambda * scale * s2 * (g_b + g_e),
        -(scale * s2 * (g_b - g_e) - lambda * s2 * s2),
    )
}

/// First-order condition of the relayed secrecy objective
/// `ln(1 + snr_direct + snr_relay(x)) - ln(1 + snr_eve) - lambda x` in the
/// relay power `x`, for a source with power `p_src`, direct gain `g_direct`,
/// source→relay gain `g_sr` and relay→destination gain `g_rd`.
///
/// The eavesdropper term does not depend on `x`, so the condition is a
/// quadratic. Returned in cubic form with a zero leading coefficient.
pub fn relay_stationarity(
    g_direct: f64,
    g_sr: f64,
    g_rd: f64,
    p_src: f64,
    sigma2: f64,
    lambda: f64,
) -> PolynomialCoefficients {
    let s2 = sigma2;
    let c = 1.0 + g_direct * p_src / s2;
    let a = g_sr * g_rd * p_src;
    let b = g_sr * p_src + s2;
    let g = g_rd;
    PolynomialCoefficients::cubic(
        0.0,
        lambda * s2 * c * g * g + lambda * a * g,
        2.0 * lambda * s2 * c * b * g + lambda * a * b,
        lambda * s2 * c * b * b - a * b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    /// Second transcription of the relay cubic for Alice, fully expanded
    /// from the published block without the shared sub-expressions.
    fn psi_expanded(g: &ChannelGains, s2: f64, al: f64, la: f64, pa: f64) -> [f64; 4] {
        let (gab, gae, gjb, gaj) = (g.g_ab, g.g_ae, g.g_jb, g.g_aj);
        let omega1 = gjb.powi(2) * (s2 + gab * pa + gaj * pa);
        let omega2 = gjb * (2.0 * s2 + 2.0 * gab * pa + gaj * pa) * (gaj + s2);
        let omega3 = (gab * pa + s2) * (gaj * gaj * pa * pa + 2.0 * gaj * pa * s2 + s2 * s2);
        let omega4 = al * (s2 + gae + gae * la * pa);
        let omega5 = al.powi(2) + gae * la * pa;
        let k = gaj * gjb * pa * gaj * pa + gaj * gjb * pa * s2;
        [
            al.powi(2) * gae * omega1,
            omega4 * omega1 + al.powi(2) * gae * omega2,
            omega4 * omega2 + al.powi(2) * gae * omega3 - al * gae * k,
            omega4 * omega3 - omega5 * k,
        ]
    }

    fn beta_expanded(g: &ChannelGains, s2: f64, al: f64, la: f64, pj: f64) -> [f64; 4] {
        let (gab, gje, gjb, gaj, gja) = (g.g_ab, g.g_je, g.g_jb, g.g_aj, g.g_ja());
        let phi1 = gab.powi(2) * (s2 + gjb * pj + gja * pj);
        let phi2 = gab * (2.0 * s2 + 2.0 * gjb * pj + gja * pj) * (gja * pj + s2);
        let phi3 = (gjb * pj + s2) * (gja * pj + s2) * (gja * pj + s2);
        let phi4 = al * gje * (s2 * la * pj + 1.0);
        let phi5 = al.powi(2) * s2 * gja * gab * gje * la * pj.powi(2) * (gja * pj + s2);
        [
            gje * phi1,
            gje * phi2 + phi1 * phi4,
            gje * phi3 + phi2 * phi4 - al * gja * gab * gje * pj * (gaj * pj + s2),
            phi3 * phi4 - phi5,
        ]
    }

    #[test]
    fn psi_reference_values() {
        let g = ChannelGains::reference();
        let psi = psi_coefficients(&g, 1.0, 0.8, 1.0, 5.0);
        assert!(rel_eq(psi.coeffs()[0], 0.192, 1e-14));
        let psi0 = psi_coefficients(&g, 1.0, 0.8, 1.0, 0.0);
        assert!(rel_eq(psi0.coeffs()[3], 1.04, 1e-14));
    }

    #[test]
    fn beta_reference_values() {
        let g = ChannelGains::reference();
        let beta = beta_coefficients(&g, 1.0, 0.8, 1.0, 5.0);
        assert!(rel_eq(beta.coeffs()[0], 0.216, 1e-14));
        // With p_j = 0 only sigma2^3 survives in the third phi term.
        let beta0 = beta_coefficients(&g, 1.0, 0.8, 1.0, 0.0);
        let phi4 = 0.8 * 0.3;
        assert!(rel_eq(beta0.coeffs()[3], 1.0 * phi4, 1e-14));
    }

    #[test]
    fn relay_cubics_match_second_transcription() {
        let cases = [
            (ChannelGains::reference(), 1.0, 0.8, 1.0, 5.0),
            (ChannelGains::reference(), 0.5, 0.3, 0.01, 12.0),
            (
                ChannelGains::new(0.9, 0.05, 0.7, 0.6, 1.3).unwrap().with_g_ja(0.4).unwrap(),
                2.0,
                1.0,
                0.2,
                3.3,
            ),
            (ChannelGains::new(0.1, 0.2, 0.3, 0.4, 0.5).unwrap(), 1.7, 0.55, 3.0, 0.0),
        ];
        for (g, s2, al, la, p) in cases {
            let psi = psi_coefficients(&g, s2, al, la, p);
            for (a, b) in psi.coeffs().iter().zip(psi_expanded(&g, s2, al, la, p)) {
                assert!(rel_eq(*a, b, 1e-12), "{a} vs {b}");
            }
            let beta = beta_coefficients(&g, s2, al, la, p);
            for (a, b) in beta.coeffs().iter().zip(beta_expanded(&g, s2, al, la, p)) {
                assert!(rel_eq(*a, b, 1e-12), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn published_mac_quadratic_reference_values() {
        let g = ChannelGains::reference();
        let q = published_mac_alice(&g, 1.0, 0.8, 0.01);
        let c = q.coeffs();
        assert!(rel_eq(c[0], 0.000768, 1e-12));
        assert!(rel_eq(c[1], 0.0056, 1e-12));
        assert!(rel_eq(c[2], -0.09, 1e-12));
    }

    #[test]
    fn own_power_quadratic_reference_values() {
        let g = ChannelGains::reference();
        let c = published_own_power_alice(&g, 1.0, 0.01);
        assert!(rel_eq(c.coeffs()[0], 0.0012, 1e-12));
        assert!(rel_eq(c.coeffs()[1], 0.007, 1e-12));
        assert!(rel_eq(c.coeffs()[2], -0.09, 1e-12));
        // Same polynomial as the donated-power condition with unit scale.
        let d = donated_power_stationarity(0.4, 0.3, 1.0, 1.0, 0.01);
        for (a, b) in c.coeffs().iter().zip(d.coeffs()) {
            assert!(rel_eq(*a, *b, 1e-15));
        }
    }

    #[test]
    fn published_mac_constant_term_drops_alpha() {
        // The derived condition scales the secrecy gap by alpha; the
        // published one does not.
        let g = ChannelGains::reference();
        let published = published_mac_alice(&g, 1.0, 0.5, 0.01);
        let derived = donated_power_stationarity(0.4, 0.3, 0.5, 1.0, 0.01);
        assert!(rel_eq(published.coeffs()[0], derived.coeffs()[0], 1e-15));
        assert!(rel_eq(published.coeffs()[1], derived.coeffs()[1], 1e-15));
        assert!(!rel_eq(published.coeffs()[2], derived.coeffs()[2], 1e-3));
        let at_one = donated_power_stationarity(0.4, 0.3, 1.0, 1.0, 0.01);
        let published_one = published_mac_alice(&g, 1.0, 1.0, 0.01);
        for (a, b) in published_one.coeffs().iter().zip(at_one.coeffs()) {
            assert!(rel_eq(*a, *b, 1e-15));
        }
    }

    #[test]
    fn distance_quadratics_reduce_at_unit_distance() {
        let g = ChannelGains::reference();
        let unit = Geometry::unit(2.0);
        assert_eq!(
            published_distance_mac_alice(&g, &unit, 1.3, 0.7, 0.02),
            published_mac_alice(&g, 1.3, 0.7, 0.02)
        );
        assert_eq!(
            published_distance_mac_john(&g, &unit, 1.3, 0.7, 0.02),
            published_mac_john(&g, 1.3, 0.7, 0.02)
        );
    }

    /// Route two: published MAC quadratic on path-loss scaled gains,
    /// multiplied through by both squared distances.
    fn scaled_route_alice(g: &ChannelGains, geo: &Geometry, s2: f64, al: f64, la: f64) -> [f64; 3] {
        let eff = g.attenuated(geo).unwrap();
        let q = published_mac_alice(&eff, s2, al, la);
        let m = geo.d_ab.powf(geo.eta) * geo.d_ae.powf(geo.eta);
        [q.coeffs()[0] * m, q.coeffs()[1] * m, q.coeffs()[2] * m]
    }

    fn scaled_route_john(g: &ChannelGains, geo: &Geometry, s2: f64, al: f64, la: f64) -> [f64; 3] {
        let eff = g.attenuated(geo).unwrap();
        let q = published_mac_john(&eff, s2, al, la);
        let m = geo.d_jb.powf(geo.eta) * geo.d_je.powf(geo.eta);
        [q.coeffs()[0] * m, q.coeffs()[1] * m, q.coeffs()[2] * m]
    }

    #[test]
    fn distance_quadratics_against_scaled_gain_route() {
        let g = ChannelGains::reference();
        let (s2, al, la) = (1.0, 0.8, 0.05);
        let geos = [
            Geometry::new(1.5, 2.5, 0.7, 3.0, 2.0, 2.0).unwrap(),
            Geometry::new(0.4, 1.1, 2.2, 0.9, 1.0, 2.0).unwrap(),
        ];
        for geo in geos {
            let alice = published_distance_mac_alice(&g, &geo, s2, al, la);
            let route = scaled_route_alice(&g, &geo, s2, al, la);
            // Quadratic and constant terms agree; the linear term pairs each
            // gain with its own distance instead of the other one.
            assert!(rel_eq(alice.coeffs()[0], route[0], 1e-12));
            assert!(rel_eq(alice.coeffs()[2], route[2], 1e-12));
            assert!(!rel_eq(alice.coeffs()[1], route[1], 1e-6));

            let john = published_distance_mac_john(&g, &geo, s2, al, la);
            let route = scaled_route_john(&g, &geo, s2, al, la);
            // Here the linear term agrees and the constant swaps distances.
            assert!(rel_eq(john.coeffs()[0], route[0], 1e-12));
            assert!(rel_eq(john.coeffs()[1], route[1], 1e-12));
            assert!(!rel_eq(john.coeffs()[2], route[2], 1e-6));
        }
        // Equal distances on each side make the two routes coincide.
        let geo = Geometry::new(1.7, 1.7, 0.6, 0.6, 2.0, 2.0).unwrap();
        let alice = published_distance_mac_alice(&g, &geo, s2, al, la);
        for (a, b) in alice.coeffs().iter().zip(scaled_route_alice(&g, &geo, s2, al, la)) {
            assert!(rel_eq(*a, b, 1e-12));
        }
        let john = published_distance_mac_john(&g, &geo, s2, al, la);
        for (a, b) in john.coeffs().iter().zip(scaled_route_john(&g, &geo, s2, al, la)) {
            assert!(rel_eq(*a, b, 1e-12));
        }
    }

    #[test]
    fn relay_stationarity_vanishes_at_objective_maximum() {
        // Central difference of the priced relay objective at the positive root.
        let (g_d, g_sr, g_rd, p, s2, la) = (0.4, 0.2, 0.5, 5.0, 1.0, 0.01);
        let q = relay_stationarity(g_d, g_sr, g_rd, p, s2, la);
        let roots = q.real_roots().unwrap();
        let x = roots.into_iter().find(|r| *r > 0.0).unwrap();
        let f = |x: f64| {
            let relay = g_sr * g_rd * p * x / (s2 * (g_sr * p + g_rd * x + s2));
            (g_d * p / s2 + relay).ln_1p() - la * x
        };
        let h = 1e-5;
        let deriv = (f(x + h) - f(x - h)) / (2.0 * h);
        assert!(deriv.abs() < 1e-8, "{deriv}");
    }
}
