// Copyright 2026 The cvcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `key = value` configuration files; command-line flags take precedence.

use std::path::Path;

use anyhow::{Context, Result};
use toml::{Table, Value};

use crate::UsageError;

#[derive(Clone, Debug, Default)]
pub struct Config {
    table: Table,
}

fn usage(msg: String) -> anyhow::Error {
    UsageError(msg).into()
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Config::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config> {
        let table: Table = text.parse().map_err(|e| usage(format!("malformed config: {e}")))?;
        Ok(Config { table })
    }

    fn lookup(&self, key: &str) -> Option<&Value> {
        self.table.get(key).or_else(|| self.table.get(&key.replace('-', "_")))
    }

    pub fn f64(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Float(v)) => Ok(Some(*v)),
            Some(Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(Value::String(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config key {key}: not a number: {s}"))),
            Some(other) => Err(usage(format!("config key {key}: expected a number, got {other}"))),
        }
    }

    pub fn u64(&self, key: &str, flag: Option<u64>) -> Result<Option<u64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Integer(v)) if *v >= 0 => Ok(Some(*v as u64)),
            Some(other) => Err(usage(format!(
                "config key {key}: expected a non-negative integer, got {other}"
            ))),
        }
    }

    pub fn string(&self, key: &str, flag: Option<String>) -> Result<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Ok(Some(other.to_string())),
        }
    }

    pub fn flag(&self, key: &str, flag: bool) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.lookup(key) {
            None => Ok(false),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(Value::String(s)) if s == "on" => Ok(true),
            Some(Value::String(s)) if s == "off" => Ok(false),
            Some(other) => Err(usage(format!(
                "config key {key}: expected true/false or on/off, got {other}"
            ))),
        }
    }
}
