//! Calculator whose buttons are ordinary controls. Results depend only on
//! the sequence of clicked labels, never on where the buttons are or how big
//! they are.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::expr::{eval_expression, format_value};
use crate::elements::{CommentEl, ControlEl, ElementId, ElementKind};
use crate::engine::{Button, Engine, EngineError, PointerEvent, Signal};
use crate::geometry::{Point, Rect};
use crate::scene::{Scene, SceneError};

/// Button labels, in the order layouts assign rectangles to them.
pub const BUTTON_TAGS: [&str; 19] =
    ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", ".", "+", "-", "*", "/", "(", ")", "=", "C"];

const CELL_W: f64 = 70.0;
const CELL_H: f64 = 50.0;
const COLUMNS: usize = 5;
const DISPLAY_HEIGHT: f64 = 40.0;

pub struct Calculator {
    engine: Engine,
    buttons: BTreeMap<String, ElementId>,
    tags: BTreeMap<ElementId, String>,
    display: ElementId,
    entry: Vec<String>,
}

impl Calculator {
    /// Builds a calculator with `rects[i]` as the button for `BUTTON_TAGS[i]`.
    pub fn with_layout(rects: &[Rect]) -> Result<Self, SceneError> {
        assert_eq!(rects.len(), BUTTON_TAGS.len(), "one rectangle per button");
        let mut scene = Scene::default();
        let mut buttons = BTreeMap::new();
        let mut tags = BTreeMap::new();
        for (tag, rect) in BUTTON_TAGS.iter().zip(rects) {
            let id = scene.add(ElementKind::Control(ControlEl { rect: *rect, tag: tag.to_string() }))?;
            buttons.insert(tag.to_string(), id);
            tags.insert(id, tag.to_string());
        }
        let top = rects.iter().map(|r| r.min.y).fold(f64::INFINITY, f64::min);
        let left = rects.iter().map(|r| r.min.x).fold(f64::INFINITY, f64::min);
        let display = scene.add(ElementKind::Comment(CommentEl {
            anchor: Point::new(left, top - DISPLAY_HEIGHT),
            angle: 0.0,
            text: "0".into(),
            attached_to: None,
        }))?;
        Ok(Calculator { engine: Engine::new(scene), buttons, tags, display, entry: Vec::new() })
    }

    /// The conventional grid.
    pub fn standard() -> Self {
        let rects: Vec<Rect> = (0..BUTTON_TAGS.len()).map(|i| grid_cell(i, 1.0)).collect();
        Self::with_layout(&rects).expect("standard layout is valid")
    }

    /// Buttons shuffled over the grid cells with random sizes and offsets
    /// inside their cells, so no two buttons overlap.
    pub fn random_layout<R: Rng>(rng: &mut R) -> Self {
        let mut cells: Vec<usize> = (0..BUTTON_TAGS.len()).collect();
        cells.shuffle(rng);
        let scale = rng.gen_range(0.5..3.0);
        let rects: Vec<Rect> = cells
            .iter()
            .map(|&c| {
                let cell = grid_cell(c, scale);
                let w = rng.gen_range(10.0..=cell.width());
                let h = rng.gen_range(10.0..=cell.height());
                let x = rng.gen_range(cell.min.x..=cell.max.x - w);
                let y = rng.gen_range(cell.min.y..=cell.max.y - h);
                Rect::from_coords(x, y, x + w, y + h)
            })
            .collect();
        Self::with_layout(&rects).expect("random layout is valid")
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn scene(&self) -> &Scene {
        self.engine.scene()
    }

    pub fn button(&self, tag: &str) -> Option<ElementId> {
        self.buttons.get(tag).copied()
    }

    pub fn display_id(&self) -> ElementId {
        self.display
    }

    pub fn display(&self) -> &str {
        match &self.scene().element(self.display).map(|e| &e.kind) {
            Some(ElementKind::Comment(c)) => &c.text,
            _ => "",
        }
    }

    pub fn entry(&self) -> &[String] {
        &self.entry
    }

    /// Press and release at the centre of each labelled button.
    pub fn click_events(&self, tags: &[&str]) -> Vec<PointerEvent> {
        let mut evs = Vec::with_capacity(tags.len() * 2);
        for tag in tags {
            let id = self.buttons[*tag];
            let ElementKind::Control(c) = &self.scene().element(id).expect("button exists").kind else {
                unreachable!("buttons are controls")
            };
            evs.push(PointerEvent::Press { button: Button::Left, p: c.rect.center() });
            evs.push(PointerEvent::Release);
        }
        evs
    }

    /// Feeds one pointer event; a completed click on a button updates the
    /// entry and the display.
    pub fn handle(&mut self, ev: PointerEvent) -> Result<Option<Signal>, EngineError> {
        let signal = self.engine.handle(ev)?;
        if let Some(Signal::ControlClicked(id)) = &signal {
            if let Some(tag) = self.tags.get(id).cloned() {
                self.apply(&tag);
            }
        }
        Ok(signal)
    }

    pub fn run(&mut self, events: &[PointerEvent]) -> Result<(), EngineError> {
        for ev in events {
            self.handle(*ev)?;
        }
        Ok(())
    }

    /// The logical effect of a button. `=` evaluates and clears the entry,
    /// `C` clears everything, anything else extends the entry.
    pub fn apply(&mut self, tag: &str) {
        let text = match tag {
            "C" => {
                self.entry.clear();
                "0".to_string()
            }
            "=" => {
                let shown = match eval_expression(&self.entry) {
                    Ok(v) => format_value(v),
                    Err(_) => "Error".to_string(),
                };
                self.entry.clear();
                shown
            }
            other => {
                self.entry.push(other.to_string());
                self.entry.concat()
            }
        };
        self.set_display(text);
    }

    fn set_display(&mut self, text: String) {
        let scene = self.engine.scene_mut();
        let mut el = scene.element(self.display).expect("display exists").clone();
        if let ElementKind::Comment(c) = &mut el.kind {
            c.text = text;
        }
        scene.update(el).expect("text change keeps the comment valid");
    }
}

fn grid_cell(i: usize, scale: f64) -> Rect {
    let (col, row) = ((i % COLUMNS) as f64, (i / COLUMNS) as f64);
    let (w, h) = (CELL_W * scale, CELL_H * scale);
    Rect::from_coords(col * w, DISPLAY_HEIGHT + row * h, (col + 1.0) * w, DISPLAY_HEIGHT + (row + 1.0) * h)
}
