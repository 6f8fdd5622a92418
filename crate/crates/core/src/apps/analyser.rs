//! Function Analyser: plot areas with scales, comments and the functions
//! drawn inside them.

use serde::{Deserialize, Serialize};

use super::expr::{parse, Expr, Grammar};
use crate::elements::{CommentEl, ElementId, ElementKind, PlotAreaEl, ScaleEdge, ScaleEl, WorldRect};
use crate::geometry::{Point, Rect};
use crate::scene::{Scene, SceneError};

pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FunctionDef {
    /// `Y(x)`.
    Explicit { expr: String },
    /// `{X(p), Y(p)}` for `p` in `[p0, p1]`.
    Parametric { x_expr: String, y_expr: String, p0: f64, p1: f64 },
}

#[derive(Debug, Clone)]
enum Compiled {
    Explicit(Expr),
    Parametric(Expr, Expr, f64, f64),
}

impl FunctionDef {
    pub fn explicit(expr: &str) -> Self {
        FunctionDef::Explicit { expr: expr.to_string() }
    }

    pub fn parametric(x_expr: &str, y_expr: &str, p0: f64, p1: f64) -> Self {
        FunctionDef::Parametric { x_expr: x_expr.to_string(), y_expr: y_expr.to_string(), p0, p1 }
    }

    fn compile(&self) -> Result<Compiled, String> {
        let err = |e: super::expr::ExprError| e.to_string();
        match self {
            FunctionDef::Explicit { expr } => Ok(Compiled::Explicit(parse(expr, Grammar::Function("x")).map_err(err)?)),
            FunctionDef::Parametric { x_expr, y_expr, p0, p1 } => {
                if !(p0.is_finite() && p1.is_finite() && p0 < p1) {
                    return Err(format!("parameter range [{p0}, {p1}] is empty"));
                }
                let x = parse(x_expr, Grammar::Function("p")).map_err(err)?;
                let y = parse(y_expr, Grammar::Function("p")).map_err(err)?;
                Ok(Compiled::Parametric(x, y, *p0, *p1))
            }
        }
    }

    /// Expressions parse and the parameter range is non-empty.
    pub fn check(&self) -> Result<(), String> {
        self.compile().map(|_| ())
    }
}

/// Samples a function over the area's world window. Non-finite samples break
/// the curve, so the result is a list of polylines in world coordinates.
pub fn sample_function(def: &FunctionDef, world: &WorldRect, n: usize) -> Result<Vec<Vec<Point>>, String> {
    if n < 2 {
        return Err(format!("need at least 2 samples, got {n}"));
    }
    let compiled = def.compile()?;
    let (t0, t1) = match &compiled {
        Compiled::Explicit(_) => (world.xmin, world.xmax),
        Compiled::Parametric(_, _, p0, p1) => (*p0, *p1),
    };
    let mut out = Vec::new();
    let mut cur: Vec<Point> = Vec::new();
    for i in 0..n {
        let t = if i == n - 1 { t1 } else { t0 + (t1 - t0) * i as f64 / (n - 1) as f64 };
        let p = match &compiled {
            Compiled::Explicit(e) => Point::new(t, e.eval(t)),
            Compiled::Parametric(x, y, _, _) => Point::new(x.eval(t), y.eval(t)),
        };
        if p.x.is_finite() && p.y.is_finite() {
            cur.push(p);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// World coordinates (y up) to screen coordinates (y down) inside the area.
pub fn world_to_screen(area: &PlotAreaEl, wp: Point) -> Point {
    let (r, w) = (&area.rect, &area.world);
    Point::new(
        r.min.x + (wp.x - w.xmin) / (w.xmax - w.xmin) * r.width(),
        r.max.y - (wp.y - w.ymin) / (w.ymax - w.ymin) * r.height(),
    )
}

pub fn screen_to_world(area: &PlotAreaEl, sp: Point) -> Point {
    let (r, w) = (&area.rect, &area.world);
    Point::new(
        w.xmin + (sp.x - r.min.x) / r.width() * (w.xmax - w.xmin),
        w.ymin + (r.max.y - sp.y) / r.height() * (w.ymax - w.ymin),
    )
}

/// Tick positions on `[lo, hi]` at a 1-2-5 step chosen so that at most
/// `max_ticks` ticks are produced.
pub fn nice_ticks(lo: f64, hi: f64, max_ticks: usize) -> Vec<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || max_ticks < 2 {
        return Vec::new();
    }
    let raw = (hi - lo) / (max_ticks - 1) as f64;
    let mut decade = 10f64.powf(raw.log10().floor());
    let step = loop {
        if let Some(&m) = [1.0, 2.0, 5.0].iter().find(|&&m| m * decade >= raw) {
            break m * decade;
        }
        decade *= 10.0;
    };
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Everything tied to one plot area. Derived from the scene on demand, so it
/// can never reference missing elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotBinding {
    pub area: ElementId,
    pub functions: Vec<FunctionDef>,
    pub scales: Vec<ElementId>,
    pub comments: Vec<ElementId>,
}

impl PlotBinding {
    pub fn of(scene: &Scene, area: ElementId) -> Option<PlotBinding> {
        let ElementKind::PlotArea(a) = &scene.element(area)?.kind else { return None };
        let scales = scene
            .elements()
            .iter()
            .filter(|e| matches!(&e.kind, ElementKind::Scale(s) if s.attached_to == area))
            .map(|e| e.id)
            .collect();
        Some(PlotBinding {
            area,
            functions: a.functions.clone(),
            scales,
            comments: scene.attached_comments(area),
        })
    }
}

/// Adds a plot area with a left and a bottom scale. Returns the area id.
pub fn add_plot(scene: &mut Scene, rect: Rect, world: WorldRect, functions: Vec<FunctionDef>) -> Result<ElementId, SceneError> {
    let area = scene.add(ElementKind::PlotArea(PlotAreaEl { rect, world, functions }))?;
    for edge in [ScaleEdge::Left, ScaleEdge::Bottom] {
        scene.add(ElementKind::Scale(ScaleEl { attached_to: area, edge, offset: 4.0, rect }))?;
    }
    Ok(area)
}

/// Adds a comment attached to `target` (an area, a scale or any element).
pub fn add_comment(scene: &mut Scene, target: ElementId, anchor: Point, text: &str) -> Result<ElementId, SceneError> {
    scene.add(ElementKind::Comment(CommentEl { anchor, angle: 0.0, text: text.to_string(), attached_to: Some(target) }))
}

/// The curves of every function of an area, mapped to screen coordinates.
pub fn screen_curves(area: &PlotAreaEl, n: usize) -> Vec<Vec<Point>> {
    area.functions
        .iter()
        .filter_map(|f| sample_function(f, &area.world, n).ok())
        .flatten()
        .map(|line| line.into_iter().map(|p| world_to_screen(area, p)).collect())
        .collect()
}
