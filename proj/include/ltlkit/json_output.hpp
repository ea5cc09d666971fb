#pragma once

#include "fuzz.hpp"
#include "trace_io.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace ltlkit
{

using ordered_json = nlohmann::ordered_json;

inline ordered_json report_json( CampaignReport const& r )
{
  ordered_json j;
  j["instances"] = ordered_json::object();
  for ( auto const& [k, v] : r.instances )
    j["instances"][k] = v;
  j["failures"] = ordered_json::object();
  for ( auto const& [k, v] : r.failures )
    j["failures"][k] = v;
  j["failure_count"] = r.failure_count;
  if ( r.first )
  {
    ordered_json cx;
    cx["schema"] = r.first->schema;
    cx["formula"] = to_string( r.first->formula );
    cx["trace"] = r.first->trace;
    cx["position"] = r.first->position;
    j["first_counterexample"] = cx;
  }
  else
    j["first_counterexample"] = nullptr;
  return j;
}

/// One object per invocation; keys always in the order command, verdict, witness, report.
inline std::string emit_json( std::string const& command, std::string const& verdict,
                              std::optional<std::string> const& witness = std::nullopt,
                              CampaignReport const* report = nullptr )
{
  ordered_json j;
  j["command"] = command;
  j["verdict"] = verdict;
  if ( witness )
    j["witness"] = *witness;
  if ( report )
    j["report"] = report_json( *report );
  return j.dump( 2 ) + "\n";
}

} // namespace ltlkit
