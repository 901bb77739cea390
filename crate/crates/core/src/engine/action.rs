use crate::error::{Error, Result};
use crate::kernel::{Backend, Morphism, PointedObject};

/// An action `α: Y ⊗ A -> A` of a pointed object, unital in the sense that
/// `α . (y ⊗ A)` is the identity.
#[derive(Clone, Debug)]
pub struct ActionObject<O> {
    pointed: PointedObject<O>,
    carrier: O,
    action: Morphism<O>,
}

impl<O: Clone + PartialEq + std::fmt::Debug> ActionObject<O> {
    pub fn new<B: Backend<Object = O> + ?Sized>(
        backend: &B,
        pointed: PointedObject<O>,
        action: Morphism<O>,
    ) -> Result<Self> {
        let carrier = action.cod().clone();
        let expected = backend.tensor_obj(pointed.carrier(), &carrier)?;
        if *action.dom() != expected {
            return Err(Error::InvalidAction("action must have domain Y ⊗ A".into()));
        }
        let id = backend.identity(&carrier);
        let at_point = backend.compose(&action, &backend.tensor_mor(pointed.point(), &id)?)?;
        if !backend.equal_mor(&at_point, &id)? {
            return Err(Error::InvalidAction("the point does not act as the identity".into()));
        }
        Ok(ActionObject {
            pointed,
            carrier,
            action,
        })
    }

    pub fn pointed(&self) -> &PointedObject<O> {
        &self.pointed
    }

    pub fn carrier(&self) -> &O {
        &self.carrier
    }

    pub fn action(&self) -> &Morphism<O> {
        &self.action
    }
}

/// The two composites `Y ⊗ A -> A` and `Y^2 ⊗ A -> A` compared by the
/// condition, one pair per summand of `Y + Y^2`.
#[derive(Clone, Debug)]
pub struct AlgFreeComposites<O> {
    /// `α . (Y ⊗ α) . (y ⊗ Y ⊗ A)`
    pub y_left: Morphism<O>,
    /// `α . (Y ⊗ α) . (Y ⊗ y ⊗ A)`
    pub y_right: Morphism<O>,
    /// Both legs restricted to `Y^2 ⊗ A`, where the pair is the identity.
    pub y2_left: Morphism<O>,
    pub y2_right: Morphism<O>,
}

pub fn alg_free_components<B: Backend + ?Sized>(
    backend: &B,
    act: &ActionObject<B::Object>,
) -> Result<AlgFreeComposites<B::Object>> {
    let y = act.pointed.carrier();
    let id_y = backend.identity(y);
    let id_a = backend.identity(&act.carrier);
    let id_ya = backend.identity(act.action.dom());
    let twice = backend.compose(&act.action, &backend.tensor_mor(&id_y, &act.action)?)?;
    let point_left = backend.tensor_mor(act.pointed.point(), &id_ya)?;
    let point_right = backend.tensor_mor(&id_y, &backend.tensor_mor(act.pointed.point(), &id_a)?)?;
    Ok(AlgFreeComposites {
        y_left: backend.compose(&twice, &point_left)?,
        y_right: backend.compose(&twice, &point_right)?,
        y2_left: twice.clone(),
        y2_right: twice,
    })
}

/// Whether the action coequalizes the reflexive pair `Y + Y^2 => Y^2`
/// after tensoring with `A`.
pub fn alg_free_condition<B: Backend + ?Sized>(
    backend: &B,
    act: &ActionObject<B::Object>,
) -> Result<bool> {
    let c = alg_free_components(backend, act)?;
    Ok(backend.equal_mor(&c.y_left, &c.y_right)? && backend.equal_mor(&c.y2_left, &c.y2_right)?)
}
