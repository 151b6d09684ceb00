//! Matrix moves: the expansion of a vertex shift, elementary equivalences
//! with their transfer maps, and a bounded strong shift equivalence search.

mod elementary;
mod expansion;
mod sse;

pub use elementary::{BijectionOrder, BipartiteEdge, ElementaryEquivalence};
pub use expansion::{expand, Expansion};
pub use sse::{sse_search, SseBounds, SseResult};
