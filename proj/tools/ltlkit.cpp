#include <ltlkit/ltlkit.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace
{

enum Exit : int
{
  positive = 0,
  negative = 1,
  usage = 2,
  input = 3,
  internal = 4,
};

struct internal_error : std::logic_error
{
  using std::logic_error::logic_error;
};

std::string model_text( ltlkit::Model const& m )
{
  return std::visit( []( auto const& t ) { return ltlkit::format_trace( t ); }, m );
}

void confirm_witness( ltlkit::Model const& m, ltlkit::Formula const& f )
{
  bool const ok = std::visit( [&]( auto const& t ) { return ltlkit::eval_ltl( t, 0, f ); }, m );
  if ( !ok )
    throw internal_error( "extracted witness does not satisfy the formula" );
}

int run_eval( std::string const& formula_text, std::string const& trace_path, std::size_t pos,
              std::optional<std::string> const& mode_text, bool json )
{
  auto const trace = ltlkit::load_trace( trace_path );
  ltlkit::Mode mode = std::holds_alternative<ltlkit::StructuredLassoTrace>( trace ) ? ltlkit::Mode::caret : ltlkit::Mode::ltl;
  if ( mode_text )
    mode = *mode_text == "caret" ? ltlkit::Mode::caret : ltlkit::Mode::ltl;
  auto const f = ltlkit::parse_formula( formula_text, mode );
  bool const v = ltlkit::eval_at( trace, pos, f, mode );
  if ( json )
    std::cout << ltlkit::emit_json( "eval", v ? "true" : "false" );
  else
    std::cout << ( v ? "true" : "false" ) << "\n";
  return v ? positive : negative;
}

int run_sat( std::string const& formula_text, std::string const& cls_text, bool json )
{
  auto const f = ltlkit::parse_formula( formula_text );
  auto const r = ltlkit::decide_sat( f, ltlkit::parse_structure_class( cls_text ) );
  std::optional<std::string> witness;
  if ( r.satisfiable )
  {
    confirm_witness( *r.model, f );
    witness = model_text( *r.model );
  }
  if ( json )
    std::cout << ltlkit::emit_json( "sat", r.satisfiable ? "sat" : "unsat", witness );
  else
    std::cout << ( r.satisfiable ? "SAT\n" + *witness : std::string( "UNSAT\n" ) );
  return r.satisfiable ? positive : negative;
}

int run_valid( std::string const& formula_text, std::string const& cls_text, bool json )
{
  auto const f = ltlkit::parse_formula( formula_text );
  auto const r = ltlkit::find_countermodel( f, ltlkit::parse_structure_class( cls_text ) );
  std::optional<std::string> witness;
  if ( r.satisfiable )
  {
    confirm_witness( *r.model, ltlkit::neg( f ) );
    witness = model_text( *r.model );
  }
  if ( json )
    std::cout << ltlkit::emit_json( "valid", r.satisfiable ? "invalid" : "valid", witness );
  else if ( r.satisfiable )
    std::cout << "INVALID\ncountermodel:\n" << *witness;
  else
    std::cout << "VALID\n";
  return r.satisfiable ? negative : positive;
}

int run_check_proof( std::string const& path, bool json )
{
  auto const v = ltlkit::check_proof( ltlkit::load_proof( path ) );
  if ( json )
    std::cout << ltlkit::emit_json( "check-proof", v.ok ? "ok" : "fail" );
  else if ( v.ok )
    std::cout << "OK\n";
  else
    std::cout << "FAIL step " << v.step << ": " << v.reason << "\n";
  if ( json && !v.ok )
    std::cerr << "step " << v.step << ": " << v.reason << "\n";
  return v.ok ? positive : negative;
}

void print_report( ltlkit::CampaignReport const& r )
{
  for ( auto const& [key, n] : r.instances )
    std::cout << key << ": " << n << " instances, " << r.failures.at( key ) << " failures\n";
  std::cout << "total failures: " << r.failure_count << "\n";
  if ( r.first )
    std::cout << "first counterexample (" << r.first->schema << ") at position " << r.first->position << ":\n"
              << "  " << ltlkit::to_string( r.first->formula ) << "\n"
              << r.first->trace;
}

int run_fuzz( ltlkit::CampaignOptions const& opts, bool json )
{
  auto const r = ltlkit::soundness_campaign( opts );
  std::string const verdict = r.failure_count == 0 ? "pass" : "fail";
  if ( json )
    std::cout << ltlkit::emit_json( "fuzz", verdict, std::nullopt, &r );
  else
    print_report( r );
  return r.failure_count == 0 ? positive : negative;
}

int run_axioms( std::string const& system )
{
  for ( auto const& [id, text] : ltlkit::list_axioms( ltlkit::parse_system( system ) ) )
    std::cout << id << "\t" << text << "\n";
  return positive;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Temporal logic toolkit: evaluation, satisfiability, proof checking, soundness fuzzing" };
  app.require_subcommand( 1 );
  bool json = false;

  auto* eval = app.add_subcommand( "eval", "Evaluate a formula on a trace file" );
  std::string formula, trace_path, cls = "gen";
  std::size_t pos = 0;
  std::optional<std::string> mode;
  eval->add_option( "--formula", formula, "Formula text" )->required();
  eval->add_option( "--trace", trace_path, "Trace file" )->required();
  eval->add_option( "--pos", pos, "Position (default 0)" );
  eval->add_option( "--mode", mode, "ltl or caret (default: caret for tagged traces)" )
      ->check( CLI::IsMember( { "ltl", "caret" } ) );
  eval->add_flag( "--json", json );

  auto* sat = app.add_subcommand( "sat", "Decide satisfiability" );
  sat->add_option( "--formula", formula )->required();
  sat->add_option( "--class", cls )->check( CLI::IsMember( { "gen", "fin", "inf" } ) );
  sat->add_flag( "--json", json );

  auto* valid = app.add_subcommand( "valid", "Decide validity" );
  valid->add_option( "--formula", formula )->required();
  valid->add_option( "--class", cls )->check( CLI::IsMember( { "gen", "fin", "inf" } ) );
  valid->add_flag( "--json", json );

  auto* check = app.add_subcommand( "check-proof", "Check a proof script" );
  std::string proof_path;
  check->add_option( "file", proof_path )->required();
  check->add_flag( "--json", json );

  auto* fuzz = app.add_subcommand( "fuzz", "Run an axiom soundness campaign" );
  ltlkit::CampaignOptions opts;
  std::string system = "ax-gen";
  std::optional<std::string> traces;
  std::optional<std::size_t> family;
  std::vector<std::string> schemas;
  fuzz->add_option( "--system", system )->check( CLI::IsMember( { "ax", "ax-gen", "ax-inf", "ax-fin", "ax-cr" } ) );
  fuzz->add_option( "--instances", opts.instances, "Instances per schema" );
  fuzz->add_option( "--family-instances", family, "Instances per C5/C6 parameter choice" );
  fuzz->add_option( "--seed", opts.gen.seed );
  fuzz->add_option( "--traces", traces, "Override the trace class" )
      ->check( CLI::IsMember( { "finite", "lasso", "mixed", "structured" } ) );
  fuzz->add_option( "--schema", schemas, "Restrict to these schemas" );
  fuzz->add_option( "--max-size", opts.gen.max_formula_size, "Maximum bound formula size" )->check( CLI::PositiveNumber );
  fuzz->add_option( "--max-length", opts.gen.max_trace_length, "Maximum trace length" )->check( CLI::PositiveNumber );
  fuzz->add_flag( "--json", json );

  auto* axioms = app.add_subcommand( "axioms", "List the schemas of a system" );
  axioms->add_option( "--system", system )->required()->check(
      CLI::IsMember( { "ax", "ax-gen", "ax-inf", "ax-fin", "ax-cr" } ) );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return usage;
  }

  try
  {
    if ( *eval )
      return run_eval( formula, trace_path, pos, mode, json );
    if ( *sat )
      return run_sat( formula, cls, json );
    if ( *valid )
      return run_valid( formula, cls, json );
    if ( *check )
      return run_check_proof( proof_path, json );
    if ( *fuzz )
    {
      opts.system = ltlkit::parse_system( system );
      opts.family_instances = family;
      opts.schemas = schemas;
      if ( traces )
        opts.traces = ltlkit::parse_trace_class( *traces );
      return run_fuzz( opts, json );
    }
    return run_axioms( system );
  }
  catch ( internal_error const& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
  catch ( std::invalid_argument const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  }
  catch ( std::out_of_range const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  }
  catch ( std::runtime_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return input;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
}
