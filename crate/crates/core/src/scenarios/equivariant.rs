use super::{Regime, Scenario, ScenarioError};
use crate::cohomology::{cyclic_group_cohomology, CyclicModule};
use crate::specseq::{InjectedDifferential, Page, PageWindow, Value};
use crate::{Integer, Rational};

/// `E₂^{s,t} = H^s(C₂; π_t)` over the window, with `π_t` supplied as a
/// module (or `None` for zero).
fn c2_page(
    window: PageWindow,
    homotopy: impl Fn(i64) -> Option<CyclicModule<Integer>>,
    source: &str,
) -> Result<Page, ScenarioError> {
    let mut page = Page::new(2, window);
    for t in window.t_min.max(0)..=window.t_max {
        let Some(m) = homotopy(t) else { continue };
        let top = window.s_max.min((t + 1) as usize);
        let groups = cyclic_group_cohomology(&m, top)?;
        for (s, g) in groups.into_iter().enumerate() {
            page.set(
                s,
                t,
                Value::Group(g),
                &format!("H^{s}(C2; pi_{t}) via the periodic resolution; {source}"),
            )?;
        }
    }
    Ok(page)
}

pub(super) fn s_sigma(window: PageWindow) -> Result<Scenario, ScenarioError> {
    let page = c2_page(
        window,
        |t| (t == 1).then(|| CyclicModule::sign(1)),
        "pi_1 = Z with the sign action, all other homotopy zero",
    )?;
    Ok(Scenario {
        name: "s-sigma".into(),
        description: "C2 acting on the sign-representation sphere: underlying homotopy Z in \
                      degree 1 with the sign action, treated as an Eilenberg-MacLane space"
            .into(),
        regime: Regime::CyclicGroup { order: 2 },
        page,
        differentials: Vec::new(),
        collapse_note: None,
        epsilon: None,
    })
}

pub(super) fn ku_c2(window: PageWindow) -> Result<Scenario, ScenarioError> {
    let page = c2_page(
        window,
        |t| {
            (t % 2 == 0).then(|| {
                if (t / 2) % 2 == 0 {
                    CyclicModule::trivial(2, 1)
                } else {
                    CyclicModule::sign(1)
                }
            })
        },
        "pi_2k KU = Z with complex conjugation acting by (-1)^k",
    )?;
    let d3 = InjectedDifferential::new(3, (0, 4), vec![vec![Rational::from_integer(1.into())]],
        "cited input: d3(beta^2) = eta^3 in the C2 homotopy fixed point spectral sequence of KU")
        .with_target_label("eta^3");
    let differentials = if window.contains(0, 4) && window.contains(3, 6) {
        vec![d3]
    } else {
        Vec::new()
    };
    Ok(Scenario {
        name: "ku-c2".into(),
        description: "C2 acting on KU by complex conjugation; pi_*KU = Z[beta^(+-1)] \
                      truncated to the window, beta^k acted on by (-1)^k"
            .into(),
        regime: Regime::CyclicGroup { order: 2 },
        page,
        differentials,
        collapse_note: None,
        epsilon: None,
    })
}
