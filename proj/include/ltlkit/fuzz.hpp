#pragma once

#include "brute_force.hpp"
#include "formula.hpp"
#include "proof.hpp"
#include "semantics.hpp"
#include "tableau.hpp"
#include "trace.hpp"
#include "trace_io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ltlkit
{

/// splitmix64; bounded draws use plain modulo so streams match across
/// standard libraries.
class Rng
{
public:
  explicit Rng( std::uint64_t seed ) : state_( seed ) {}

  std::uint64_t next()
  {
    std::uint64_t z = ( state_ += 0x9e3779b97f4a7c15ull );
    z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
    z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
    return z ^ ( z >> 31 );
  }

  std::size_t below( std::size_t n ) { return static_cast<std::size_t>( next() % n ); }

  /// Uniform in [lo, hi].
  std::size_t between( std::size_t lo, std::size_t hi ) { return lo + below( hi - lo + 1 ); }

  bool coin() { return next() & 1; }

private:
  std::uint64_t state_;
};

/// Stable per-stream seed from a base seed, a stream label and an index.
inline std::uint64_t derive_seed( std::uint64_t seed, std::string_view label, std::uint64_t index )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( char c : label )
    h = ( h ^ static_cast<unsigned char>( c ) ) * 0x100000001b3ull;
  Rng r( seed ^ h );
  r.next();
  return r.next() ^ ( index * 0xd1b54a32d192ed03ull );
}

struct GenConfig
{
  std::uint64_t seed = 1;
  std::size_t max_formula_size = 5;
  std::vector<std::string> alphabet{ "p", "q" };
  /// Finite length, or prefix plus loop for lassos.
  std::size_t max_trace_length = 12;
  Mode mode = Mode::ltl;
};

enum class TraceClass
{
  finite,
  lasso,
  mixed,
  structured,
};

inline std::string_view trace_class_name( TraceClass c )
{
  switch ( c )
  {
  case TraceClass::finite:
    return "finite";
  case TraceClass::lasso:
    return "lasso";
  case TraceClass::mixed:
    return "mixed";
  case TraceClass::structured:
    return "structured";
  }
  return "mixed";
}

inline TraceClass parse_trace_class( std::string_view s )
{
  for ( auto c : { TraceClass::finite, TraceClass::lasso, TraceClass::mixed, TraceClass::structured } )
    if ( s == trace_class_name( c ) )
      return c;
  throw std::invalid_argument( "unknown trace class '" + std::string( s ) + "'" );
}

class Generator
{
public:
  explicit Generator( GenConfig cfg ) : cfg_( std::move( cfg ) ), rng_( cfg_.seed )
  {
    if ( cfg_.max_formula_size == 0 || cfg_.max_trace_length == 0 || cfg_.alphabet.empty() )
      throw std::invalid_argument( "generator bounds must be positive and the alphabet nonempty" );
  }

  GenConfig const& config() const { return cfg_; }

  Formula formula() { return formula_of_size( rng_.between( 1, cfg_.max_formula_size ) ); }

  /// In caret mode the leaves also range over call, ret and int.
  Formula formula_of_size( std::size_t n )
  {
    bool const caret = cfg_.mode == Mode::caret;
    if ( n <= 1 )
    {
      std::size_t const extra = caret ? 3 : 0;
      std::size_t const pick = rng_.below( cfg_.alphabet.size() + extra + 1 );
      if ( pick == 0 )
        return truth();
      if ( pick <= cfg_.alphabet.size() )
        return prop( cfg_.alphabet[pick - 1] );
      static char const* const tags[] = { "call", "ret", "int" };
      return prop( tags[pick - cfg_.alphabet.size() - 1] );
    }
    static Kind const unary_ltl[] = { Kind::Not, Kind::Next };
    static Kind const unary_cr[] = { Kind::Not, Kind::Next, Kind::AbsNext };
    static Kind const binary_ltl[] = { Kind::And, Kind::Until };
    static Kind const binary_cr[] = { Kind::And, Kind::Until, Kind::AbsUntil };
    if ( n == 2 || rng_.coin() )
    {
      Kind const k = caret ? unary_cr[rng_.below( 3 )] : unary_ltl[rng_.below( 2 )];
      return Formula::make_unary( k, formula_of_size( n - 1 ) );
    }
    Kind const k = caret ? binary_cr[rng_.below( 3 )] : binary_ltl[rng_.below( 2 )];
    std::size_t const left = rng_.between( 1, n - 2 );
    auto a = formula_of_size( left );
    auto b = formula_of_size( n - 1 - left );
    return Formula::make_binary( k, a, b );
  }

  Valuation valuation()
  {
    Valuation v;
    for ( auto const& p : cfg_.alphabet )
      if ( rng_.coin() )
        v.insert( p );
    return v;
  }

  StructuredState structured_state()
  {
    static StateTag const tags[] = { StateTag::call, StateTag::ret, StateTag::internal };
    return { valuation(), tags[rng_.below( 3 )] };
  }

  FiniteTrace finite_trace()
  {
    std::vector<Valuation> states( rng_.between( 1, cfg_.max_trace_length ) );
    for ( auto& s : states )
      s = valuation();
    return FiniteTrace( std::move( states ) );
  }

  LassoTrace lasso()
  {
    auto [p, l] = lasso_shape();
    std::vector<Valuation> prefix( p ), loop( l );
    for ( auto& s : prefix )
      s = valuation();
    for ( auto& s : loop )
      s = valuation();
    return LassoTrace( std::move( prefix ), std::move( loop ) );
  }

  StructuredLassoTrace structured_lasso()
  {
    auto [p, l] = lasso_shape();
    std::vector<StructuredState> prefix( p ), loop( l );
    for ( auto& s : prefix )
      s = structured_state();
    for ( auto& s : loop )
      s = structured_state();
    return StructuredLassoTrace( std::move( prefix ), std::move( loop ) );
  }

  AnyTrace trace( TraceClass cls )
  {
    switch ( cls )
    {
    case TraceClass::finite:
      return finite_trace();
    case TraceClass::lasso:
      return lasso();
    case TraceClass::mixed:
      if ( rng_.coin() )
        return finite_trace();
      return lasso();
    case TraceClass::structured:
      return structured_lasso();
    }
    return lasso();
  }

private:
  std::pair<std::size_t, std::size_t> lasso_shape()
  {
    std::size_t const total = rng_.between( 1, cfg_.max_trace_length );
    std::size_t const loop = rng_.between( 1, total );
    return { total - loop, loop };
  }

  GenConfig cfg_;
  Rng rng_;
};

inline Formula gen_formula( GenConfig const& cfg ) { return Generator( cfg ).formula(); }

inline AnyTrace gen_trace( GenConfig const& cfg, TraceClass cls ) { return Generator( cfg ).trace( cls ); }

/// Every core LTL formula with at most max_size nodes over `true` and the alphabet.
inline std::vector<Formula> enumerate_formulas( std::size_t max_size, std::vector<std::string> const& alphabet )
{
  std::vector<std::vector<Formula>> by_size( max_size + 1 );
  if ( max_size == 0 )
    return {};
  by_size[1].push_back( truth() );
  for ( auto const& p : alphabet )
    by_size[1].push_back( prop( p ) );
  for ( std::size_t n = 2; n <= max_size; ++n )
  {
    for ( Kind k : { Kind::Not, Kind::Next } )
      for ( auto const& a : by_size[n - 1] )
        by_size[n].push_back( Formula::make_unary( k, a ) );
    for ( Kind k : { Kind::And, Kind::Until } )
      for ( std::size_t left = 1; left + 1 < n; ++left )
        for ( auto const& a : by_size[left] )
          for ( auto const& b : by_size[n - 1 - left] )
            by_size[n].push_back( Formula::make_binary( k, a, b ) );
  }
  std::vector<Formula> all;
  for ( auto& v : by_size )
    all.insert( all.end(), v.begin(), v.end() );
  return all;
}

struct Counterexample
{
  std::string schema;
  Formula formula;
  std::string trace; // trace file format
  std::size_t position = 0;
};

struct CampaignReport
{
  std::map<std::string, std::size_t> instances;
  std::map<std::string, std::size_t> failures;
  std::size_t failure_count = 0;
  std::optional<Counterexample> first;

  void record_failure( std::string const& key, Counterexample cx )
  {
    ++failures[key];
    ++failure_count;
    if ( !first )
      first = std::move( cx );
  }
};

inline TraceClass default_trace_class( SystemId s )
{
  switch ( s )
  {
  case SystemId::ax_gen:
    return TraceClass::mixed;
  case SystemId::ax_fin:
    return TraceClass::finite;
  case SystemId::ax_cr:
    return TraceClass::structured;
  case SystemId::ax:
  case SystemId::ax_inf:
    return TraceClass::lasso;
  }
  return TraceClass::lasso;
}

struct CampaignOptions
{
  SystemId system = SystemId::ax_gen;
  std::size_t instances = 1000;
  /// Instances per parameter choice of C5/C6; defaults to `instances`.
  std::optional<std::size_t> family_instances;
  /// Overrides the system's own trace class (negative controls).
  std::optional<TraceClass> traces;
  /// Restricts the run to these schema ids when nonempty.
  std::vector<std::string> schemas;
  GenConfig gen;
};

namespace detail
{

struct SchemaJob
{
  std::string key;
  std::string schema;
  Params params;
  std::size_t count;
};

inline std::vector<SchemaJob> campaign_jobs( CampaignOptions const& opts )
{
  std::vector<SchemaJob> jobs;
  std::size_t const fam = opts.family_instances.value_or( opts.instances );
  for ( auto const& [id, _] : list_axioms( opts.system ) )
  {
    if ( !opts.schemas.empty() && std::find( opts.schemas.begin(), opts.schemas.end(), id ) == opts.schemas.end() )
      continue;
    auto const kind = schema_info( id ).kind;
    if ( kind == SchemaKind::axiom )
      jobs.push_back( { id, id, {}, opts.instances } );
    else if ( kind == SchemaKind::family && id == "C5" )
    {
      for ( long n : { 0L, 1L, 2L } )
        jobs.push_back( { "C5[n=" + std::to_string( n ) + "]", id, { { "n", n } }, fam } );
    }
    else if ( kind == SchemaKind::family && id == "C6" )
    {
      for ( auto [m, n] : { std::pair{ 1L, 0L }, std::pair{ 2L, 0L }, std::pair{ 2L, 1L } } )
        jobs.push_back( { "C6[m=" + std::to_string( m ) + ",n=" + std::to_string( n ) + "]", id,
                          { { "m", m }, { "n", n } }, fam } );
    }
  }
  return jobs;
}

inline std::optional<std::size_t> failing_position( AnyTrace const& t, Formula const& f )
{
  return std::visit( [&]( auto const& tr ) { return first_failure( tr, f ); }, t );
}

} // namespace detail

/*! \brief Pointwise soundness check of a system's axiom schemas.

  Each instance binds the metavariables to fresh random formulas and is
  evaluated at every canonical position of a fresh random trace. Rules
  are not fuzzed: they preserve validity, not pointwise truth.
*/
inline CampaignReport soundness_campaign( CampaignOptions const& opts )
{
  CampaignReport report;
  TraceClass const traces = opts.traces.value_or( default_trace_class( opts.system ) );
  GenConfig formula_cfg = opts.gen;
  formula_cfg.mode = opts.system == SystemId::ax_cr ? Mode::caret : Mode::ltl;

  for ( auto const& job : detail::campaign_jobs( opts ) )
  {
    auto const& info = detail::schema_info( job.schema );
    report.instances[job.key] = job.count;
    report.failures[job.key] = 0;
    for ( std::size_t i = 0; i < job.count; ++i )
    {
      GenConfig cfg = formula_cfg;
      cfg.seed = derive_seed( opts.gen.seed, job.key, i );
      Generator gen( cfg );
      Bindings bindings;
      for ( auto const& mv : info.metavariables )
        bindings.emplace( mv, gen.formula() );
      auto const instance = instantiate_schema( job.schema, job.params, bindings );
      auto const trace = gen.trace( traces );
      if ( auto pos = detail::failing_position( trace, instance ) )
        report.record_failure( job.key, { job.key, instance, format_trace( trace ), *pos } );
    }
  }
  return report;
}

struct CrossCheckOutcome
{
  bool sat_gen = false, sat_fin = false, sat_inf = false;
  bool witnesses_ok = true;
  bool oracle_agrees = true;
  bool decomposition_ok = true;
};

/*! \brief Tableau verdicts for one formula against evaluation and brute force.

  Every witness must satisfy f at position 0 and belong to its class;
  every UNSAT verdict must survive exhaustive search up to `bound`
  states; gen must be satisfiable exactly when fin or inf is.
*/
inline CrossCheckOutcome cross_check_formula( Formula const& f, std::size_t bound )
{
  CrossCheckOutcome out;
  auto check = [&]( StructureClass cls, bool& sat ) {
    auto r = decide_sat( f, cls );
    sat = r.satisfiable;
    if ( !r.satisfiable )
      return;
    bool ok = std::visit( [&]( auto const& m ) { return eval_ltl( m, 0, f ); }, *r.model );
    if ( cls == StructureClass::fin )
      ok = ok && std::holds_alternative<FiniteTrace>( *r.model );
    if ( cls == StructureClass::inf )
      ok = ok && std::holds_alternative<LassoTrace>( *r.model );
    out.witnesses_ok = out.witnesses_ok && ok;
  };
  check( StructureClass::gen, out.sat_gen );
  check( StructureClass::fin, out.sat_fin );
  check( StructureClass::inf, out.sat_inf );

  std::optional<bool> finite_found, lasso_found;
  if ( !out.sat_fin || !out.sat_gen )
    finite_found = brute_force_sat( f, StructureClass::fin, bound ).satisfiable;
  if ( !out.sat_inf || !out.sat_gen )
    lasso_found = brute_force_sat( f, StructureClass::inf, bound ).satisfiable;
  if ( !out.sat_fin && *finite_found )
    out.oracle_agrees = false;
  if ( !out.sat_inf && *lasso_found )
    out.oracle_agrees = false;
  if ( !out.sat_gen && ( *finite_found || *lasso_found ) )
    out.oracle_agrees = false;

  out.decomposition_ok = out.sat_gen == ( out.sat_fin || out.sat_inf );
  return out;
}

/// Random-formula version of the exhaustive cross-check.
inline CampaignReport cross_check_campaign( std::size_t samples, GenConfig cfg )
{
  if ( cfg.alphabet.size() > 2 || cfg.max_formula_size > 7 )
    throw std::invalid_argument( "cross-check needs at most 2 propositions and formula size at most 7" );
  cfg.mode = Mode::ltl;
  std::size_t const bound = std::min<std::size_t>( cfg.max_trace_length, 8 );
  CampaignReport report;
  report.instances["samples"] = samples;
  for ( auto key : { "witness", "oracle", "decomposition" } )
    report.failures[key] = 0;
  for ( std::size_t i = 0; i < samples; ++i )
  {
    GenConfig c = cfg;
    c.seed = derive_seed( cfg.seed, "cross-check", i );
    auto const f = Generator( c ).formula();
    auto const r = cross_check_formula( f, bound );
    report.instances["sat-gen"] += r.sat_gen;
    report.instances["sat-fin"] += r.sat_fin;
    report.instances["sat-inf"] += r.sat_inf;
    if ( !r.witnesses_ok )
      report.record_failure( "witness", { "witness", f, "", 0 } );
    if ( !r.oracle_agrees )
      report.record_failure( "oracle", { "oracle", f, "", 0 } );
    if ( !r.decomposition_ok )
      report.record_failure( "decomposition", { "decomposition", f, "", 0 } );
  }
  return report;
}

} // namespace ltlkit
