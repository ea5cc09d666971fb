#pragma once

#include "formula.hpp"
#include "parser.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ltlkit
{

enum class SystemId
{
  ax,
  ax_gen,
  ax_inf,
  ax_fin,
  ax_cr,
};

inline std::string_view system_name( SystemId s )
{
  switch ( s )
  {
  case SystemId::ax:
    return "ax";
  case SystemId::ax_gen:
    return "ax-gen";
  case SystemId::ax_inf:
    return "ax-inf";
  case SystemId::ax_fin:
    return "ax-fin";
  case SystemId::ax_cr:
    return "ax-cr";
  }
  return "ax";
}

inline SystemId parse_system( std::string_view s )
{
  for ( auto id : { SystemId::ax, SystemId::ax_gen, SystemId::ax_inf, SystemId::ax_fin, SystemId::ax_cr } )
    if ( s == system_name( id ) )
      return id;
  throw std::invalid_argument( "unknown system '" + std::string( s ) + "'" );
}

class proof_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class SchemaKind
{
  tautology,
  axiom,
  family, // axiom schema with integer parameters
  rule,
};

struct SchemaInfo
{
  std::string id;
  SchemaKind kind;
  /// Template in formula syntax; metavariables are `phi` and `psi`.
  std::string text;
  std::vector<std::string> metavariables;
};

namespace detail
{

inline std::vector<SchemaInfo> const& schema_table()
{
  static std::vector<SchemaInfo> const table = {
      { "Prop", SchemaKind::tautology, "every propositional tautology", {} },
      { "MP", SchemaKind::rule, "from phi and phi -> psi infer psi", {} },
      { "T1", SchemaKind::axiom, "X phi & X (phi -> psi) -> X psi", { "phi", "psi" } },
      { "T2", SchemaKind::axiom, "phi U psi <-> psi | (phi & X (phi U psi))", { "phi", "psi" } },
      { "T3", SchemaKind::axiom, "X !phi -> !X phi", { "phi" } },
      { "T2'", SchemaKind::axiom, "phi U psi <-> psi | (phi & N (phi U psi))", { "phi", "psi" } },
      { "T3'", SchemaKind::axiom, "X phi <-> (X false | N phi)", { "phi" } },
      { "Inf", SchemaKind::axiom, "!X false", {} },
      { "Fin", SchemaKind::axiom, "F X false", {} },
      { "RT1", SchemaKind::rule, "from phi infer X phi", {} },
      { "RT2", SchemaKind::rule, "from phi1 -> !psi & X phi1 infer phi1 -> !(phi U psi)", {} },
      { "G1", SchemaKind::axiom, "X phi & X (phi -> psi) -> X psi", { "phi", "psi" } },
      { "G2", SchemaKind::axiom, "phi U psi <-> psi | (phi & N (phi U psi))", { "phi", "psi" } },
      { "G3", SchemaKind::axiom, "X phi <-> (X false | N phi)", { "phi" } },
      { "G4", SchemaKind::axiom, "!X false", {} },
      { "RG1", SchemaKind::rule, "from phi infer X phi", {} },
      { "RG2", SchemaKind::rule, "from phi1 -> !psi & X phi1 infer phi1 -> !(phi U psi)", {} },
      { "A1", SchemaKind::axiom, "Xa phi & Xa (phi -> psi) -> Xa psi", { "phi", "psi" } },
      { "A2", SchemaKind::axiom, "phi Ua psi <-> psi | (phi & Na (phi Ua psi))", { "phi", "psi" } },
      { "A3", SchemaKind::axiom, "Xa phi <-> (Xa false | Na phi)", { "phi" } },
      { "RA1", SchemaKind::rule, "from phi infer Xa phi", {} },
      { "RA2", SchemaKind::rule, "from phi1 -> !psi & Xa phi1 infer phi1 -> !(phi Ua psi)", {} },
      { "C1", SchemaKind::axiom, "(call & !ret & !int) | (!call & ret & !int) | (!call & !ret & int)", {} },
      { "C2", SchemaKind::axiom, "!call & X !ret -> (X phi <-> Na phi)", { "phi" } },
      { "C3", SchemaKind::axiom, "!call & X ret -> Xa false", {} },
      { "C4", SchemaKind::axiom, "Na phi -> F phi", { "phi" } },
      { "C5", SchemaKind::family, "call & X CR[0](n,n)(ret & phi) -> Na phi   (n >= 0)", { "phi" } },
      { "C6", SchemaKind::family, "call & X CR[0](m,n)(G !ret) -> Xa false   (m > n >= 0)", {} },
  };
  return table;
}

inline std::vector<std::string> const& system_schemas( SystemId s )
{
  static std::vector<std::string> const ax = { "Prop", "MP", "T1", "T2", "T3", "RT1", "RT2" };
  static std::vector<std::string> const gen = { "Prop", "MP", "T1", "T2'", "T3'", "RT1", "RT2" };
  static std::vector<std::string> const inf = { "Prop", "MP", "T1", "T2'", "T3'", "RT1", "RT2", "Inf" };
  static std::vector<std::string> const fin = { "Prop", "MP", "T1", "T2'", "T3'", "RT1", "RT2", "Fin" };
  static std::vector<std::string> const cr = { "Prop", "MP",  "G1",  "G2",  "G3", "G4", "RG1", "RG2", "A1", "A2",
                                               "A3",   "RA1", "RA2", "C1",  "C2", "C3", "C4",  "C5",  "C6" };
  switch ( s )
  {
  case SystemId::ax:
    return ax;
  case SystemId::ax_gen:
    return gen;
  case SystemId::ax_inf:
    return inf;
  case SystemId::ax_fin:
    return fin;
  case SystemId::ax_cr:
    return cr;
  }
  return ax;
}

inline SchemaInfo const& schema_info( std::string_view id )
{
  for ( auto const& s : schema_table() )
    if ( s.id == id )
      return s;
  throw proof_error( "unknown schema '" + std::string( id ) + "'" );
}

/// Splits the desugared a -> b, i.e. !(!!a & !b).
inline std::optional<std::pair<Formula, Formula>> match_implies( Formula const& f )
{
  if ( !f.is( Kind::Not ) || !f.arg().is( Kind::And ) )
    return std::nullopt;
  auto const l = f.arg().lhs();
  auto const r = f.arg().rhs();
  if ( !l.is( Kind::Not ) || !l.arg().is( Kind::Not ) || !r.is( Kind::Not ) )
    return std::nullopt;
  return std::pair{ l.arg().arg(), r.arg() };
}

} // namespace detail

inline bool schema_in_system( SystemId s, std::string_view schema )
{
  auto const& list = detail::system_schemas( s );
  return std::find( list.begin(), list.end(), schema ) != list.end();
}

/// Schema table of a system: (id, template text), rules included.
inline std::vector<std::pair<std::string, std::string>> list_axioms( SystemId s )
{
  std::vector<std::pair<std::string, std::string>> out;
  for ( auto const& id : detail::system_schemas( s ) )
    out.emplace_back( id, detail::schema_info( id ).text );
  return out;
}

/*! \brief Expands CR^c_{m,n}(f).

  Internal states until a call (descending with c+1, m-1) or a return
  (c-1, n-1); returns are only offered while c > 0 or no calls remain.
  Every leaf is `int U f`.
*/
inline Formula expand_cr( long c, long m, long n, Formula const& f )
{
  if ( c < 0 || m < 0 || n < 0 || c + m < n )
    throw proof_error( "CR parameters need c, m, n >= 0 and c + m >= n" );
  auto const internal = prop( "int" );
  if ( m == 0 && n == 0 )
    return until( internal, f );
  auto call_branch = [&] { return until( internal, conj( prop( "call" ), weak_next( expand_cr( c + 1, m - 1, n, f ) ) ) ); };
  auto ret_branch = [&] { return until( internal, conj( prop( "ret" ), weak_next( expand_cr( c - 1, m, n - 1, f ) ) ) ); };
  if ( n == 0 )
    return call_branch();
  if ( m == 0 )
    return ret_branch();
  if ( c == 0 )
    return call_branch();
  return disj( call_branch(), ret_branch() );
}

class tautology_cap_exceeded : public proof_error
{
public:
  tautology_cap_exceeded( std::size_t atoms )
    : proof_error( "tautology check has " + std::to_string( atoms ) + " abstraction atoms, cap is 20" )
  {
  }
};

/*! \brief Propositional validity with maximal non-Boolean subformulas as letters.

  Anything whose head is not `!`, `&` or `true` (propositions, next and
  until formulas) is an opaque letter; equal subformulas share a letter.
*/
inline bool check_tautology( Formula const& f )
{
  std::vector<Formula> letters;
  FormulaMap<std::size_t> letter_of;
  std::function<void( Formula const& )> collect = [&]( Formula const& g ) {
    switch ( g.kind() )
    {
    case Kind::True:
      return;
    case Kind::Not:
      collect( g.arg() );
      return;
    case Kind::And:
      collect( g.lhs() );
      collect( g.rhs() );
      return;
    default:
      if ( letter_of.emplace( g, letters.size() ).second )
        letters.push_back( g );
    }
  };
  collect( f );
  if ( letters.size() > 20 )
    throw tautology_cap_exceeded( letters.size() );

  std::function<bool( Formula const&, std::uint32_t )> value = [&]( Formula const& g, std::uint32_t v ) -> bool {
    switch ( g.kind() )
    {
    case Kind::True:
      return true;
    case Kind::Not:
      return !value( g.arg(), v );
    case Kind::And:
      return value( g.lhs(), v ) && value( g.rhs(), v );
    default:
      return ( v >> letter_of.at( g ) ) & 1;
    }
  };
  std::uint32_t const rows = std::uint32_t{ 1 } << letters.size();
  for ( std::uint32_t v = 0; v < rows; ++v )
    if ( !value( f, v ) )
      return false;
  return true;
}

using Bindings = std::map<std::string, Formula>;
using Params = std::map<std::string, long>;

/// Builds the instance of a schema; throws proof_error on missing or
/// unexpected bindings and on parameter violations.
inline Formula instantiate_schema( std::string_view schema, Params const& params, Bindings const& bindings )
{
  auto const& info = detail::schema_info( schema );
  if ( info.kind == SchemaKind::rule || info.kind == SchemaKind::tautology )
    throw proof_error( "'" + info.id + "' is not an axiom schema" );

  for ( auto const& [name, _] : bindings )
    if ( std::find( info.metavariables.begin(), info.metavariables.end(), name ) == info.metavariables.end() )
      throw proof_error( "schema " + info.id + " has no metavariable '" + name + "'" );
  std::unordered_map<std::string, Formula> subst;
  for ( auto const& mv : info.metavariables )
  {
    auto it = bindings.find( mv );
    if ( it == bindings.end() )
      throw proof_error( "schema " + info.id + " needs a binding for '" + mv + "'" );
    subst.emplace( mv, it->second );
  }

  auto param = [&]( char const* key ) {
    auto it = params.find( key );
    if ( it == params.end() )
      throw proof_error( "schema " + info.id + " needs parameter '" + key + "'" );
    return it->second;
  };

  if ( info.id == "C5" )
  {
    long const n = param( "n" );
    if ( n < 0 || params.size() != 1 )
      throw proof_error( "C5 takes exactly one parameter n >= 0" );
    auto const phi = subst.at( "phi" );
    return implies( conj( prop( "call" ), weak_next( expand_cr( 0, n, n, conj( prop( "ret" ), phi ) ) ) ),
                    abs_strong_next( phi ) );
  }
  if ( info.id == "C6" )
  {
    long const m = param( "m" );
    long const n = param( "n" );
    if ( !( m > n && n >= 0 ) || params.size() != 2 )
      throw proof_error( "C6 takes parameters m > n >= 0" );
    return implies( conj( prop( "call" ), weak_next( expand_cr( 0, m, n, always( neg( prop( "ret" ) ) ) ) ) ),
                    abs_weak_next( falsity() ) );
  }
  if ( !params.empty() )
    throw proof_error( "schema " + info.id + " takes no parameters" );
  return substitute( parse_formula( info.text, Mode::caret ), subst );
}

/// Structural comparison of f with the instance; errors as instantiate_schema,
/// plus a schema outside the system.
inline bool check_axiom_instance( SystemId system, std::string_view schema, Params const& params, Bindings const& bindings,
                                  Formula const& f )
{
  if ( !schema_in_system( system, schema ) )
    throw proof_error( "schema " + std::string( schema ) + " is not admissible in " + std::string( system_name( system ) ) );
  if ( schema == "Prop" )
    return check_tautology( f );
  return instantiate_schema( schema, params, bindings ) == f;
}

struct AxiomInstance
{
  std::string schema;
  Params params;
  Bindings bindings;
};
struct Taut
{
};
struct ModusPonens
{
  std::size_t minor; // premise phi
  std::size_t major; // premise phi -> psi
};
struct GenNext
{
  std::size_t premise;
};
struct IndUntil
{
  std::size_t premise;
};
struct GenAbsNext
{
  std::size_t premise;
};
struct IndAbsUntil
{
  std::size_t premise;
};

using Justification = std::variant<AxiomInstance, Taut, ModusPonens, GenNext, IndUntil, GenAbsNext, IndAbsUntil>;

struct ProofStep
{
  std::size_t number;
  Formula formula;
  Justification justification;
};

struct ProofScript
{
  SystemId system = SystemId::ax_gen;
  std::vector<ProofStep> steps;
};

struct Verdict
{
  bool ok = true;
  std::size_t step = 0;
  std::string reason;

  static Verdict failure( std::size_t step, std::string reason ) { return { false, step, std::move( reason ) }; }
};

namespace detail
{

/// Induction rule: premise phi1 -> (!psi & NEXT phi1), conclusion phi1 -> !(phi UNTIL psi).
inline std::optional<std::string> check_induction( Formula const& premise, Formula const& step, Kind next_kind, Kind until_kind )
{
  auto p = match_implies( premise );
  if ( !p || !p->second.is( Kind::And ) )
    return "premise is not of the form phi1 -> (!psi & next phi1)";
  auto const body = p->second;
  if ( !body.lhs().is( Kind::Not ) || !body.rhs().is( next_kind ) || body.rhs().arg() != p->first )
    return "premise is not of the form phi1 -> (!psi & next phi1)";
  auto const psi = body.lhs().arg();
  auto s = match_implies( step );
  if ( !s || s->first != p->first || !s->second.is( Kind::Not ) || !s->second.arg().is( until_kind ) ||
       s->second.arg().rhs() != psi )
    return "conclusion does not match phi1 -> !(phi until psi) for the premise";
  return std::nullopt;
}

} // namespace detail

/// Checks every step in order and reports the first one that fails.
inline Verdict check_proof( ProofScript const& script )
{
  bool const caret = script.system == SystemId::ax_cr;
  for ( std::size_t k = 0; k < script.steps.size(); ++k )
  {
    auto const& step = script.steps[k];
    std::size_t const number = k + 1;
    if ( step.number != number )
      return Verdict::failure( step.number, "step numbers must run 1, 2, 3, ..." );
    if ( !caret && has_abstract_operator( step.formula ) )
      return Verdict::failure( number, "abstract operator in an LTL system" );

    auto premise = [&]( std::size_t i ) -> std::optional<Formula> {
      if ( i == 0 || i >= number )
        return std::nullopt;
      return script.steps[i - 1].formula;
    };
    auto forward = [&]( std::size_t i ) {
      return Verdict::failure( number, "premise " + std::to_string( i ) + " is not an earlier step" );
    };

    std::optional<Verdict> bad = std::visit(
        [&]( auto const& j ) -> std::optional<Verdict> {
          using J = std::decay_t<decltype( j )>;
          if constexpr ( std::is_same_v<J, AxiomInstance> )
          {
            if ( !schema_in_system( script.system, j.schema ) )
              return Verdict::failure( number, "schema " + j.schema + " is not admissible in " +
                                                   std::string( system_name( script.system ) ) );
            auto const kind = detail::schema_info( j.schema ).kind;
            if ( kind == SchemaKind::rule )
              return Verdict::failure( number, j.schema + " is an inference rule, not an axiom" );
            try
            {
              if ( !check_axiom_instance( script.system, j.schema, j.params, j.bindings, step.formula ) )
                return Verdict::failure( number, "bad instance of " + j.schema );
            }
            catch ( proof_error const& e )
            {
              return Verdict::failure( number, e.what() );
            }
            return std::nullopt;
          }
          else if constexpr ( std::is_same_v<J, Taut> )
          {
            try
            {
              if ( !check_tautology( step.formula ) )
                return Verdict::failure( number, "not a propositional tautology" );
            }
            catch ( proof_error const& e )
            {
              return Verdict::failure( number, e.what() );
            }
            return std::nullopt;
          }
          else if constexpr ( std::is_same_v<J, ModusPonens> )
          {
            auto minor = premise( j.minor );
            if ( !minor )
              return forward( j.minor );
            auto major = premise( j.major );
            if ( !major )
              return forward( j.major );
            if ( *major != implies( *minor, step.formula ) )
              return Verdict::failure( number, "bad premise shape: step " + std::to_string( j.major ) + " is not step " +
                                                   std::to_string( j.minor ) + " -> this step" );
            return std::nullopt;
          }
          else if constexpr ( std::is_same_v<J, GenNext> || std::is_same_v<J, GenAbsNext> )
          {
            constexpr bool abstract = std::is_same_v<J, GenAbsNext>;
            if ( abstract && !caret )
              return Verdict::failure( number, "abstract generalization is not admissible in " +
                                                   std::string( system_name( script.system ) ) );
            auto p = premise( j.premise );
            if ( !p )
              return forward( j.premise );
            auto const expect = abstract ? abs_weak_next( *p ) : weak_next( *p );
            if ( step.formula != expect )
              return Verdict::failure( number, std::string( "bad premise shape: expected the " ) +
                                                   ( abstract ? "abstract " : "" ) + "next of step " +
                                                   std::to_string( j.premise ) );
            return std::nullopt;
          }
          else
          {
            constexpr bool abstract = std::is_same_v<J, IndAbsUntil>;
            if ( abstract && !caret )
              return Verdict::failure( number, "abstract induction is not admissible in " +
                                                   std::string( system_name( script.system ) ) );
            auto p = premise( j.premise );
            if ( !p )
              return forward( j.premise );
            auto err = detail::check_induction( *p, step.formula, abstract ? Kind::AbsNext : Kind::Next,
                                                abstract ? Kind::AbsUntil : Kind::Until );
            if ( err )
              return Verdict::failure( number, "bad premise shape: " + *err );
            return std::nullopt;
          }
        },
        step.justification );
    if ( bad )
      return *bad;
  }
  return {};
}

} // namespace ltlkit
