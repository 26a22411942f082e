#pragma once

// validate -> effective -> molecule -> labels -> oracle, per energy value.

#include <algorithm>
#include <atomic>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fzmol/effective.hpp"
#include "fzmol/error.hpp"
#include "fzmol/labels.hpp"
#include "fzmol/molecule.hpp"
#include "fzmol/oracle.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

struct RunOptions {
  Tolerances tol;
  bool oracle = true;
  int oracle_grid = 2000;
  int oracle_per_band = 8;
  int oracle_samples = kOracleSamples;
};

struct ComponentRecord {
  LabeledMolecule labeled;
  std::optional<OracleReport> oracle;
};

enum class EnergyStatus {
  Ok,
  Empty,         // V > h everywhere
  Skipped,       // singular or non-Bott energy, unsupported atom: not classified
  CheckFailed,   // a consistency check between independent computations failed
};

constexpr const char* to_string(EnergyStatus s) {
  switch (s) {
    case EnergyStatus::Ok: return "ok";
    case EnergyStatus::Empty: return "empty";
    case EnergyStatus::Skipped: return "skipped";
    case EnergyStatus::CheckFailed: return "failed";
  }
  return "?";
}

struct EnergyRecord {
  double h = 0.0;
  EnergyStatus status = EnergyStatus::Ok;
  std::optional<ErrorCode> error;
  std::string message;
  std::vector<ComponentRecord> components;
};

/// Errors that reject the input energy rather than expose an inconsistency.
inline bool is_input_rejection(ErrorCode c) {
  switch (c) {
    case ErrorCode::SingularEnergy:
    case ErrorCode::DegenerateCritical:
    case ErrorCode::MissedRootSuspicion:
    case ErrorCode::UnsupportedCentralAtom:
      return true;
    default:
      return false;
  }
}

inline EnergyRecord classify_energy(const Profile& p, double h, const RunOptions& opt = {}) {
  EnergyRecord rec;
  rec.h = h;
  try {
    for (const auto& m : enumerate_isoenergy_components(p, h, opt.tol)) {
      ComponentRecord c;
      c.labeled = compute_labels(m);
      if (opt.oracle)
        c.oracle = verify_molecule(p, h, m, opt.oracle_per_band, opt.oracle_grid, opt.oracle_samples);
      rec.components.push_back(std::move(c));
    }
    for (const auto& c : rec.components)
      if (!c.labeled.topalov_ok) {
        rec.status = EnergyStatus::CheckFailed;
        rec.error = ErrorCode::InconsistentLabels;
        rec.message = "Topalov check failed: " + c.labeled.topalov.note;
      }
  } catch (const Error& e) {
    rec.components.clear();
    rec.error = e.code();
    rec.message = e.what();
    if (e.code() == ErrorCode::EmptyLevel) rec.status = EnergyStatus::Empty;
    else if (is_input_rejection(e.code())) rec.status = EnergyStatus::Skipped;
    else rec.status = EnergyStatus::CheckFailed;
  }
  return rec;
}

/// Energies h_min + (h_max - h_min) i / (samples - 1); one sample means h_min.
inline std::vector<double> sweep_energies(double h_min, double h_max, int samples) {
  std::vector<double> hs;
  for (int i = 0; i < samples; ++i)
    hs.push_back(samples == 1 ? h_min : h_min + (h_max - h_min) * i / (samples - 1));
  return hs;
}

/// Classifies every energy concurrently; the result is in input order.
inline std::vector<EnergyRecord> classify_energies(const Profile& p, const std::vector<double>& hs,
                                                   const RunOptions& opt = {}) {
  std::vector<EnergyRecord> out(hs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < hs.size(); i = next++) out[i] = classify_energy(p, hs[i], opt);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(hs.size())));
  std::vector<std::future<void>> jobs;
  for (unsigned t = 0; t < n; ++t) jobs.push_back(std::async(std::launch::async, worker));
  for (auto& j : jobs) j.get();
  return out;
}

/// 0: everything classified and checked; 2: a cross-check failed; 3: every energy
/// rejected (a single rejected energy counts as all).
inline int exit_status(const std::vector<EnergyRecord>& recs) {
  bool any_failed = false, all_rejected = !recs.empty();
  for (const auto& r : recs) {
    if (r.status == EnergyStatus::CheckFailed) any_failed = true;
    if (r.status != EnergyStatus::Skipped) all_rejected = false;
  }
  if (any_failed) return 2;
  if (all_rejected) return 3;
  return 0;
}

}  // namespace fzmol
