#pragma once

#include <optional>
#include <string>
#include <vector>

#include "annodb/dependency.hpp"
#include "annodb/query.hpp"
#include "annodb/storage.hpp"

namespace annodb::cli {

enum class OutputMode { kTable, kCsv, kJsonl };

std::optional<OutputMode> parse_output_mode(const std::string& name);

// Renders a relation. Table mode appends `[a<aid>]` markers to annotated
// cells and a legend; csv mode adds a `<column>_ann` column per data column
// when anything is annotated; jsonl prints a header line, one line per tuple
// and one line per legend entry (sequence numbers only, no wall-clock time).
std::string render_relation(const AnnotatedRelation& rel, const AnnotationStore& store, OutputMode mode);

// Plain listing of a message in the chosen mode.
std::string render_message(const std::string& message, OutputMode mode, const char* key = "message");

std::string describe_rule(const DependencyRule& rule);
std::string render_rules(const DependencyEngine& deps);

}  // namespace annodb::cli
