//! Line-delimited JSON protocol for driving environments from other
//! processes.
//!
//! Each request is one JSON object per line with a `cmd` field; each
//! response is one JSON object per line carrying `"v": 1`, `ok`, and the
//! request's `id` when one was given. Failures carry an `error` code and a
//! human-readable `message`; they never end the session.

use std::io::{self, BufRead, Write};
use std::net::{TcpListener, ToSocketAddrs};

use base64::Engine;
use serde_json::{json, Map, Value};

use crate::env::{Env, EnvConfig, EnvError, Info, ObsType, DEFAULT_REPEAT_THRESHOLD};
use crate::observation::Observation;
use crate::params::format_params;
use crate::puzzles::PuzzleId;
use crate::rng::Rng;

pub const PROTOCOL_VERSION: u64 = 1;

/// Error codes sent in the `error` field.
pub mod codes {
    pub const BAD_REQUEST: &str = "bad_request";
    pub const UNKNOWN_CMD: &str = "unknown_cmd";
    pub const NO_ENV: &str = "no_env";
    pub const BAD_ACTION: &str = "bad_action";
    pub const BAD_PARAMS: &str = "bad_params";
    pub const NOT_RESET: &str = "not_reset";
    pub const EPISODE_OVER: &str = "episode_over";
    pub const GENERATION_FAILED: &str = "generation_failed";
}

struct Failure {
    code: &'static str,
    message: String,
}

fn fail(code: &'static str, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<EnvError> for Failure {
    fn from(e: EnvError) -> Self {
        let code = match &e {
            EnvError::Params(_) | EnvError::InvalidConfig(_) | EnvError::Raster(_) => codes::BAD_PARAMS,
            EnvError::Generation(_) => codes::GENERATION_FAILED,
            EnvError::NotReset => codes::NOT_RESET,
            EnvError::EpisodeOver => codes::EPISODE_OVER,
            EnvError::ActionOutOfRange { .. } => codes::BAD_ACTION,
        };
        fail(code, e.to_string())
    }
}

type Reply = Result<Map<String, Value>, Failure>;

/// One client's state: at most one environment.
#[derive(Default)]
pub struct Session {
    env: Option<Env>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    /// Handles one request line and returns the response line (without the
    /// trailing newline).
    pub fn handle_line(&mut self, line: &str) -> String {
        let request: Result<Map<String, Value>, Failure> = match serde_json::from_str::<Value>(line) {
            Ok(Value::Object(m)) => Ok(m),
            Ok(_) => Err(fail(codes::BAD_REQUEST, "request must be a JSON object")),
            Err(e) => Err(fail(codes::BAD_REQUEST, format!("invalid JSON: {e}"))),
        };
        let id = request.as_ref().ok().and_then(|m| m.get("id").cloned());
        let reply = request.and_then(|m| self.dispatch(&m));
        let mut out = match reply {
            Ok(body) => {
                let mut m = body;
                m.insert("ok".into(), Value::Bool(true));
                m
            }
            Err(f) => {
                let mut m = Map::new();
                m.insert("ok".into(), Value::Bool(false));
                m.insert("error".into(), Value::from(f.code));
                m.insert("message".into(), Value::from(f.message));
                m
            }
        };
        out.insert("v".into(), Value::from(PROTOCOL_VERSION));
        if let Some(id) = id {
            out.insert("id".into(), id);
        }
        Value::Object(out).to_string()
    }

    fn dispatch(&mut self, req: &Map<String, Value>) -> Reply {
        let cmd = match req.get("cmd") {
            Some(Value::String(s)) => s.as_str(),
            Some(_) => return Err(fail(codes::BAD_REQUEST, "`cmd` must be a string")),
            None => return Err(fail(codes::BAD_REQUEST, "missing `cmd`")),
        };
        match cmd {
            "make" => self.make(req),
            "spec" => self.spec(),
            "reset" => self.reset(req),
            "step" => self.step(req),
            "mask" => {
                let mask = self.env()?.action_mask()?;
                Ok(object([("mask", json!(mask))]))
            }
            "close" => {
                self.env = None;
                Ok(Map::new())
            }
            other => Err(fail(codes::UNKNOWN_CMD, format!("unknown command `{other}`"))),
        }
    }

    fn env(&mut self) -> Result<&mut Env, Failure> {
        self.env.as_mut().ok_or_else(|| fail(codes::NO_ENV, "no environment; send `make` first"))
    }

    fn make(&mut self, req: &Map<String, Value>) -> Reply {
        let bad = |m: String| fail(codes::BAD_PARAMS, m);
        let puzzle: PuzzleId = str_field(req, "puzzle")?
            .ok_or_else(|| bad("missing `puzzle`".into()))?
            .parse()
            .map_err(|e: crate::params::ParamError| bad(e.to_string()))?;
        let params = str_field(req, "params")?.ok_or_else(|| bad("missing `params`".into()))?;
        let mut cfg = EnvConfig::new(puzzle, params).map_err(Failure::from)?;
        if let Some(obs) = str_field(req, "obs")?.or(str_field(req, "obs_type")?) {
            cfg.obs_type = obs.parse::<ObsType>().map_err(bad)?;
        }
        if let Some(v) = req.get("pixel_size") {
            cfg.pixel_size = v.as_u64().ok_or_else(|| bad("`pixel_size` must be a positive integer".into()))? as usize;
        }
        match req.get("max_steps") {
            None => {}
            Some(Value::Null) => cfg.max_steps = None,
            Some(v) => cfg.max_steps = Some(u32_of(v).ok_or_else(|| bad("`max_steps` must be a positive integer".into()))?),
        }
        match req.get("early_term") {
            None | Some(Value::Null) | Some(Value::Bool(false)) => {}
            Some(Value::Bool(true)) => cfg.repeat_threshold = Some(DEFAULT_REPEAT_THRESHOLD),
            Some(v) => {
                cfg.repeat_threshold =
                    Some(u32_of(v).ok_or_else(|| bad("`early_term` must be a positive integer or boolean".into()))?)
            }
        }
        if let Some(v) = req.get("seed") {
            cfg.base_seed = v.as_u64().ok_or_else(|| bad("`seed` must be an unsigned integer".into()))?;
        }
        let env = Env::new(cfg).map_err(Failure::from)?;
        let canonical = format_params(puzzle, &env.config().params).unwrap_or_default();
        let reply = object([
            ("puzzle", json!(puzzle.name())),
            ("params", json!(canonical)),
            ("actions", json!(env.action_count())),
            ("action_names", action_names(puzzle)),
        ]);
        self.env = Some(env);
        Ok(reply)
    }

    fn spec(&mut self) -> Reply {
        let env = self.env()?;
        let puzzle = env.config().puzzle;
        let observation = match env.config().obs_type {
            ObsType::Pixels => {
                let s = env.config().pixel_size;
                json!({"type": "pixels", "shape": [3, s, s], "dtype": "uint8"})
            }
            ObsType::State => {
                let probe = match env.state() {
                    Some(s) => s.clone(),
                    None => env.puzzle().generate(&mut Rng::seed_from_u64(0)).map_err(EnvError::from)?,
                };
                let obs = env.puzzle().encode_state(&probe);
                let keys: Vec<Value> = obs
                    .entries()
                    .iter()
                    .map(|(k, v)| {
                        let mut shape: Vec<Value> = v.shape().iter().map(|&d| json!(d)).collect();
                        // Edge counts differ between instances.
                        if puzzle == PuzzleId::Untangle && *k == "edges" {
                            shape[0] = Value::Null;
                        }
                        json!({"name": k, "shape": shape})
                    })
                    .collect();
                json!({"type": "state", "keys": keys})
            }
        };
        let cfg = env.config();
        Ok(object([
            ("puzzle", json!(puzzle.name())),
            ("actions", json!(env.action_count())),
            ("action_names", action_names(puzzle)),
            ("observation", observation),
            ("max_steps", json!(cfg.max_steps)),
            ("early_term", json!(cfg.repeat_threshold)),
            ("reward_range", json!([cfg.reward_failed, cfg.reward_solved])),
        ]))
    }

    fn reset(&mut self, req: &Map<String, Value>) -> Reply {
        let seed = match req.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| fail(codes::BAD_PARAMS, "`seed` must be an unsigned integer"))?),
        };
        let (obs, info) = self.env()?.reset(seed)?;
        Ok(object([("observation", observation_json(&obs)), ("info", info_json(&info))]))
    }

    fn step(&mut self, req: &Map<String, Value>) -> Reply {
        let env = self.env()?;
        let action = req
            .get("action")
            .and_then(Value::as_u64)
            .ok_or_else(|| fail(codes::BAD_ACTION, "`action` must be a non-negative integer"))?;
        let r = env.step(usize::try_from(action).unwrap_or(usize::MAX))?;
        Ok(object([
            ("observation", observation_json(&r.observation)),
            ("reward", json!(r.reward)),
            ("terminated", json!(r.terminated)),
            ("truncated", json!(r.truncated)),
            ("info", info_json(&r.info)),
        ]))
    }
}

fn object<const N: usize>(fields: [(&str, Value); N]) -> Map<String, Value> {
    fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn str_field<'a>(req: &'a Map<String, Value>, key: &str) -> Result<Option<&'a str>, Failure> {
    match req.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(fail(codes::BAD_PARAMS, format!("`{key}` must be a string"))),
    }
}

fn u32_of(v: &Value) -> Option<u32> {
    v.as_u64().filter(|&n| n >= 1).and_then(|n| u32::try_from(n).ok())
}

fn action_names(puzzle: PuzzleId) -> Value {
    json!(puzzle.actions().iter().map(|a| a.name()).collect::<Vec<_>>())
}

pub fn observation_json(obs: &Observation) -> Value {
    match obs {
        Observation::State(s) => serde_json::to_value(s).expect("observations serialize"),
        Observation::Pixels(p) => json!({
            "shape": p.shape(),
            "dtype": "uint8",
            "data": base64::engine::general_purpose::STANDARD.encode(&p.data),
        }),
    }
}

pub fn info_json(info: &Info) -> Value {
    json!({
        "puzzle_state": info.puzzle_state,
        "action_mask": info.action_mask,
        "step_count": info.step_count,
        "status": info.status,
    })
}

/// Runs one session over a line stream until end of input.
pub fn serve<R: BufRead, W: Write>(input: R, mut output: W) -> io::Result<()> {
    let mut session = Session::new();
    for line in input.lines() {
        let line = match line {
            Ok(l) => l,
            // Undecodable bytes are reported like any other bad request.
            Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                let reply = session.handle_line("\u{0}");
                writeln!(output, "{reply}")?;
                output.flush()?;
                continue;
            }
            Err(e) => return Err(e),
        };
        let reply = session.handle_line(line.trim_end_matches('\r'));
        writeln!(output, "{reply}")?;
        output.flush()?;
    }
    Ok(())
}

/// Accepts TCP connections, one thread and session per connection.
pub fn serve_tcp(addr: impl ToSocketAddrs) -> io::Result<()> {
    let listener = TcpListener::bind(addr)?;
    for stream in listener.incoming() {
        let stream = stream?;
        std::thread::spawn(move || {
            let reader = match stream.try_clone() {
                Ok(s) => io::BufReader::new(s),
                Err(_) => return,
            };
            let _ = serve(reader, stream);
        });
    }
    Ok(())
}
