//! Signal-flow diagrams, their semantics □ in linear relations, and the
//! translation T from circuit terms.

use crate::circuit::{parse_label_generator, CircuitModel};
use crate::linrel::{blackbox, describe_difference, LinRel, RelError, VarStyle};
use crate::exactla::Mat;
use crate::scalar::Field;
use crate::term::{eval, gen, id, par, seq, sym, Generator, PropModel, PropTerm, Signature, TermError};

pub fn sigflow_signature() -> Signature {
    Signature::new()
        .with("codup", 2, 1)
        .with("codel", 0, 1)
        .with("dup", 1, 2)
        .with("del", 1, 0)
        .with("add", 2, 1)
        .with("coadd", 1, 2)
        .with("zero", 0, 1)
        .with("cozero", 1, 0)
        .with_family("scalar", 1, 1)
}

pub fn scalar_gen(lit: &str) -> PropTerm {
    PropTerm::Gen(Generator::family("scalar", lit))
}

/// The functor □: signal-flow terms as linear relations, one coordinate per wire.
#[derive(Debug, Clone)]
pub struct FinRelModel<F> {
    sig: Signature,
    _field: std::marker::PhantomData<F>,
}

impl<F> Default for FinRelModel<F> {
    fn default() -> Self {
        FinRelModel {
            sig: sigflow_signature(),
            _field: std::marker::PhantomData,
        }
    }
}

fn matrix<F: Field>(cols: usize, rows: &[&[i64]]) -> Mat<F> {
    Mat::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
        .expect("literal shapes")
}

/// Generator images, before any dagger.
pub fn dup<F: Field>() -> LinRel<F> {
    LinRel::graph(&matrix(1, &[&[1], &[1]]))
}

pub fn del<F: Field>() -> LinRel<F> {
    LinRel::graph(&matrix(1, &[]))
}

pub fn add<F: Field>() -> LinRel<F> {
    LinRel::graph(&matrix(2, &[&[1, 1]]))
}

pub fn zero<F: Field>() -> LinRel<F> {
    LinRel::graph(&matrix(0, &[&[]]))
}

impl<F: Field> PropModel for FinRelModel<F> {
    type Value = LinRel<F>;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn generator(&self, g: &Generator) -> Result<LinRel<F>, TermError> {
        Ok(match (g.name.as_str(), &g.arg) {
            ("dup", None) => dup(),
            ("codup", None) => dup().dagger(),
            ("del", None) => del(),
            ("codel", None) => del().dagger(),
            ("add", None) => add(),
            ("coadd", None) => add().dagger(),
            ("zero", None) => zero(),
            ("cozero", None) => zero().dagger(),
            ("scalar", Some(lit)) => {
                let c = F::parse_literal(lit).map_err(|e| TermError::BadArgument {
                    generator: g.to_string(),
                    msg: e.to_string(),
                })?;
                LinRel::graph(&Mat::from_rows(1, vec![vec![c]]).unwrap())
            }
            _ => return Err(TermError::UnknownGenerator(g.to_string())),
        })
    }

    fn identity(&self, n: usize) -> LinRel<F> {
        LinRel::identity(n)
    }

    fn symmetry(&self, m: usize, n: usize) -> LinRel<F> {
        LinRel::braid(m, n)
    }

    fn compose(&self, f: &LinRel<F>, g: &LinRel<F>) -> LinRel<F> {
        f.compose(g).expect("type-checked term")
    }

    fn tensor(&self, f: &LinRel<F>, g: &LinRel<F>) -> LinRel<F> {
        f.tensor(g)
    }

    fn equal(&self, a: &LinRel<F>, b: &LinRel<F>) -> bool {
        a.equals(b)
    }

    fn distinguish(&self, a: &LinRel<F>, b: &LinRel<F>) -> Option<String> {
        describe_difference(a, b, VarStyle::Plain)
    }
}

pub fn box_eval<F: Field>(t: &PropTerm) -> Result<LinRel<F>, TermError> {
    eval(t, &FinRelModel::<F>::default())
}

/// T on generators. Each circuit wire becomes a potential wire above a
/// current wire.
pub fn translate_generator(g: &Generator) -> Result<PropTerm, TermError> {
    let mid_swap = || par([id(1), sym(1, 1), id(1)]);
    Ok(match (g.name.as_str(), &g.arg) {
        ("m", None) => seq([mid_swap(), par([gen("codup"), gen("add")])]),
        ("d", None) => seq([par([gen("dup"), gen("coadd")]), mid_swap()]),
        ("i", None) => par([gen("codel"), gen("zero")]),
        ("e", None) => par([gen("del"), gen("cozero")]),
        ("label", Some(_)) => {
            let label = parse_label_generator(g)?;
            let z = label.impedance().ok_or_else(|| TermError::BadArgument {
                generator: g.to_string(),
                msg: "sources have no signal-flow translation".into(),
            })?;
            seq([
                par([id(1), gen("dup")]),
                par([id(1), scalar_gen(&z.to_string()), id(1)]),
                par([gen("add"), id(1)]),
            ])
        }
        _ => return Err(TermError::UnknownGenerator(g.to_string())),
    })
}

/// The functor T, applied structurally.
pub fn translate_t(t: &PropTerm) -> Result<PropTerm, TermError> {
    Ok(match t {
        PropTerm::Gen(g) => translate_generator(g)?,
        PropTerm::Id(n) => PropTerm::Id(2 * n),
        PropTerm::Sym(m, n) => PropTerm::Sym(2 * m, 2 * n),
        PropTerm::Seq(a, b) => PropTerm::Seq(Box::new(translate_t(a)?), Box::new(translate_t(b)?)),
        PropTerm::Par(a, b) => PropTerm::Par(Box::new(translate_t(a)?), Box::new(translate_t(b)?)),
    })
}

/// Both sides of the commuting square for one circuit term.
pub fn square_sides<F: Field>(t: &PropTerm) -> Result<(LinRel<F>, LinRel<F>), String> {
    let circuit = eval(t, &CircuitModel::default()).map_err(|e| e.to_string())?;
    let direct = blackbox::<F>(&circuit).map_err(|e: RelError| e.to_string())?;
    let via_flow = box_eval::<F>(&translate_t(t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok((via_flow, direct))
}

/// □(T(t)) against the black box of the circuit `t` denotes.
pub fn square_check<F: Field>(t: &PropTerm) -> Result<bool, String> {
    let (a, b) = square_sides::<F>(t)?;
    Ok(a.equals(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_signature;
    use crate::linrel::impedance_rel;
    use crate::scalar::{Rat, RatFunc};
    use crate::term::parse_term;

    type Q = Rat;

    #[test]
    fn generator_images() {
        let d = box_eval::<Q>(&gen("dup")).unwrap();
        assert!(d.contains(&[Rat::from(4), Rat::from(4), Rat::from(4)]));
        assert_eq!(d.dim(), 1);
        let c = box_eval::<Q>(&scalar_gen("3/2")).unwrap();
        assert!(c.contains(&[Rat::from(2), Rat::from(3)]));
        assert!(box_eval::<Q>(&scalar_gen("s")).is_err());
        assert!(box_eval::<RatFunc>(&scalar_gen("s")).is_ok());
    }

    #[test]
    fn zig_zag() {
        let cap = seq([gen("codel"), gen("dup")]);
        let cup = seq([gen("codup"), gen("del")]);
        let t = seq([par([cap, id(1)]), par([id(1), cup])]);
        assert_eq!(box_eval::<Q>(&t).unwrap(), LinRel::identity(1));
    }

    #[test]
    fn special_law() {
        let t = seq([gen("dup"), gen("codup")]);
        assert_eq!(box_eval::<Q>(&t).unwrap(), LinRel::identity(1));
    }

    #[test]
    fn translation_doubles_width() {
        let t = parse_term("(seq (par (gen m) (id 1)) (par (gen d) (id 1)) (sym 2 1))").unwrap();
        let (m, n) = t.arity(&circuit_signature()).unwrap();
        let tt = translate_t(&t).unwrap();
        assert_eq!(tt.arity(&sigflow_signature()).unwrap(), (2 * m, 2 * n));
        assert!(translate_t(&gen("bogus")).is_err());
    }

    #[test]
    fn square_on_generators() {
        for name in ["m", "i", "d", "e"] {
            assert!(square_check::<Q>(&gen(name)).unwrap(), "{name}");
        }
        let z = PropTerm::Gen(Generator::family("label", "resistor:2"));
        assert!(square_check::<Q>(&z).unwrap());
        let tz = box_eval::<Q>(&translate_t(&z).unwrap()).unwrap();
        assert_eq!(tz, impedance_rel(Rat::from(2)));
        let c = PropTerm::Gen(Generator::family("label", "capacitor:3"));
        assert!(square_check::<RatFunc>(&c).unwrap());
        assert!(square_check::<Q>(&id(1)).unwrap());
    }
}
