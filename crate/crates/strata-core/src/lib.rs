/*! Finite stratified descent: categories, pseudofunctors, and gluing.

This crate makes descent over finite posets executable. Everything is
presented by explicit finite tables — categories by composition tables,
pseudofunctors by per-morphism transition functors with coherence
isomorphisms — so every theorem-shaped statement in the library surface is
checkable by exhaustive enumeration, and every checker reports concrete
witnesses when it fails.

The layers, bottom to top:

- [`fincat`]: finite categories, functors, natural transformations, functor
  categories, and an equivalence oracle that produces quasi-inverses.
- [`pseudo`]: pseudofunctors on a finite shape category, descent data, and
  the descent category construction with its projection cone.
- [`posetstack`]: stratified posets, stacks on their open sets, and the
  pullback/pushforward adjunction along level-preserving maps.
- [`gluing`]: gluing data indexed by closed strata, the associated diagrams
  of stacks, the glued stack, and the round-trip comparison equivalences.
- [`monodromy`]: finite 2-computads, 2-representations, section categories,
  and transport of sections across homotopies.
- [`constructible`]: stratified gluing of section categories driven by
  monodromy data, with tube-composite checks.
- [`doc`]: a canonical JSON document model for all of the above.

Enumeration is capped: every search threads a [`Caps`]-derived [`Budget`]
and fails loudly with [`Error::SizeCap`] instead of silently truncating.
*/

pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod gluing;
pub mod monodromy;
pub mod posetstack;
pub mod pseudo;

pub use error::{Budget, Caps, Error, Result};
