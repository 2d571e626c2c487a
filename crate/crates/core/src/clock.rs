//! Wall-clock stopwatch that also works on `wasm32-unknown-unknown`,
//! where `std::time::Instant` is unavailable at runtime.

#[cfg(not(target_arch = "wasm32"))]
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    start: std::time::Instant,
}

#[cfg(not(target_arch = "wasm32"))]
impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            start: std::time::Instant::now(),
        }
    }

    pub fn elapsed_micros(&self) -> u64 {
        self.start.elapsed().as_micros().min(u64::MAX as u128) as u64
    }
}

#[cfg(target_arch = "wasm32")]
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    start_ms: f64,
}

#[cfg(target_arch = "wasm32")]
impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            start_ms: js_sys::Date::now(),
        }
    }

    pub fn elapsed_micros(&self) -> u64 {
        ((js_sys::Date::now() - self.start_ms).max(0.0) * 1000.0) as u64
    }
}
