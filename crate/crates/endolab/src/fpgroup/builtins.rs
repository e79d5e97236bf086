//! The built-in presentation catalog: the classified `G(p,r,t,T)` family,
//! the two exceptional order-32 groups, and the `Q8 x C2^n` family.

use super::{ParseError, Presentation};
use crate::coordgroup::GroupParams;

#[derive(Debug, Clone)]
pub enum BuiltinKey {
    /// The classified presentation on generators x, y, z with parameters
    /// `(p, r, t, T)`. Valid for every `1 <= t <= r` with `T` invertible
    /// mod `p^t`, including the `p = 2, t = r` family that the coordinate
    /// model refuses.
    Coord(GroupParams),
    /// Order-32 exceptional group (ii).
    Thm2eII,
    /// Order-32 exceptional group (iii).
    Thm2eIII,
    /// `Q8 x C2^n`.
    Q8xC2n(usize),
}

impl BuiltinKey {
    /// String keys accepted on the command line: `thm2e_ii`, `thm2e_iii`,
    /// `q8xc2n` (with `n`), and `coord` (with group parameters).
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinKey::Coord(_) => "coord",
            BuiltinKey::Thm2eII => "thm2e_ii",
            BuiltinKey::Thm2eIII => "thm2e_iii",
            BuiltinKey::Q8xC2n(_) => "q8xc2n",
        }
    }
}

pub fn builtin_presentation(key: &BuiltinKey) -> Result<Presentation, ParseError> {
    match key {
        BuiltinKey::Coord(params) => coord_presentation(params),
        BuiltinKey::Thm2eII => Presentation::parse(
            "gens: x y z\n\
             rel: x^4 = y^4 = [y,z] = 1\n\
             rel: x^2 = z^2 = [x,y]\n\
             rel: (x z)^2 = y^2",
        ),
        BuiltinKey::Thm2eIII => Presentation::parse(
            "gens: x y z\n\
             rel: x^4 = z^4 = [y,z] = 1\n\
             rel: x^2 = y^2 = [x,y]\n\
             rel: [x,z] = z^2",
        ),
        BuiltinKey::Q8xC2n(n) => q8xc2n_presentation(*n),
    }
}

/// The classified presentation:
///
/// ```text
/// x^{p^{r+t}} = y^{p^{r+t}} = z^{p^{r+t}} = [x^{p^t},y] = ... = [z^{p^t},y] = 1,
/// [x,y] = x^{p^r t11} y^{p^r t12} z^{p^r t13},
/// [x,z] = x^{p^r t21} y^{p^r t22} z^{p^r t23},
/// [y,z] = x^{p^r t31} y^{p^r t32} z^{p^r t33}
/// ```
fn coord_presentation(params: &GroupParams) -> Result<Presentation, ParseError> {
    params
        .validate_base()
        .map_err(|e| ParseError::at(0, 0, format!("bad parameters: {e}")))?;
    let p = params.p;
    let prt = p.pow(params.r + params.t);
    let pt = p.pow(params.t);
    let q = p.pow(params.r);
    let names = ["x", "y", "z"];

    let mut text = String::from("gens: x y z\n");
    text.push_str(&format!(
        "rel: x^{prt} = y^{prt} = z^{prt} = [x^{pt},y] = [x^{pt},z] = [y^{pt},x] = [y^{pt},z] = [z^{pt},x] = [z^{pt},y] = 1\n"
    ));
    for (row, (left, right)) in [("x", "y"), ("x", "z"), ("y", "z")].iter().enumerate() {
        let mut rhs = String::new();
        for col in 0..3 {
            let exp = q * params.t_mat.entry(row, col);
            if exp != 0 {
                if !rhs.is_empty() {
                    rhs.push(' ');
                }
                rhs.push_str(&format!("{}^{}", names[col], exp));
            }
        }
        // An invertible T has no zero row, so rhs is never empty.
        text.push_str(&format!("rel: [{left},{right}] = {rhs}\n"));
    }
    Presentation::parse(&text)
}

/// `Q8 x C2^n` on generators `a, b, e1..en`: the quaternion relators plus
/// central involutions.
fn q8xc2n_presentation(n: usize) -> Result<Presentation, ParseError> {
    let mut text = String::from("gens: a b");
    for i in 1..=n {
        text.push_str(&format!(" e{i}"));
    }
    text.push('\n');
    text.push_str("rel: a^4\nrel: a^2 b^-2\nrel: b^-1 a^-1 b a^-1\n");
    for i in 1..=n {
        text.push_str(&format!("rel: e{i}^2\nrel: [a,e{i}]\nrel: [b,e{i}]\n"));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            text.push_str(&format!("rel: [e{i},e{j}]\n"));
        }
    }
    Presentation::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::todd_coxeter;
    use crate::group::{self, FiniteGroup};
    use crate::modmat::{Mat3, Modulus};

    fn identity_params(p: u64, r: u32, t: u32) -> GroupParams {
        GroupParams::new(p, r, t, Mat3::identity(Modulus::new(p, t).unwrap())).unwrap()
    }

    #[test]
    fn exceptional_groups_have_order_32() {
        for key in [BuiltinKey::Thm2eII, BuiltinKey::Thm2eIII] {
            let pres = builtin_presentation(&key).unwrap();
            assert_eq!(pres.generator_count(), 3);
            assert_eq!(pres.relators().len(), 7);
            let g = todd_coxeter(&pres, 10_000).unwrap();
            assert_eq!(g.order(), 32, "{}", key.name());
        }
    }

    #[test]
    fn quaternion_family_orders_and_ranks() {
        for n in 0..=3 {
            let pres = builtin_presentation(&BuiltinKey::Q8xC2n(n)).unwrap();
            let g = todd_coxeter(&pres, 10_000).unwrap();
            assert_eq!(g.order(), 8 << n);
            assert_eq!(group::generator_rank(&g).unwrap(), 2 + n as u32);
            let d = group::derived_subgroup(&g).unwrap();
            assert_eq!(d.order(), 2);
        }
    }

    #[test]
    fn coord_presentation_realizes_the_classified_orders() {
        let g64 = todd_coxeter(
            &builtin_presentation(&BuiltinKey::Coord(identity_params(2, 1, 1))).unwrap(),
            100_000,
        )
        .unwrap();
        assert_eq!(g64.order(), 64);

        let g729 = todd_coxeter(
            &builtin_presentation(&BuiltinKey::Coord(identity_params(3, 1, 1))).unwrap(),
            100_000,
        )
        .unwrap();
        assert_eq!(g729.order(), 729);
    }

    #[test]
    fn coord_presentation_rejects_bad_parameters() {
        let singular = GroupParams { p: 3, r: 1, t: 1, t_mat: Mat3::zero(Modulus::new(3, 1).unwrap()) };
        assert!(builtin_presentation(&BuiltinKey::Coord(singular)).is_err());
    }

    #[test]
    fn designated_generators_satisfy_their_own_relators() {
        let pres = builtin_presentation(&BuiltinKey::Q8xC2n(1)).unwrap();
        let g = todd_coxeter(&pres, 10_000).unwrap();
        assert!(crate::fpgroup::satisfies_relators(&g, &g.generators(), &pres));
        let all_identity = vec![g.identity(); pres.generator_count()];
        assert!(crate::fpgroup::satisfies_relators(&g, &all_identity, &pres));
    }
}
