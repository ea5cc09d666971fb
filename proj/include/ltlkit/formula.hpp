#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ltlkit
{

/// Core constructors. Every other connective is sugar removed by the parser.
enum class Kind : std::uint8_t
{
  True,
  Prop,
  Not,
  And,
  Next,        // weak next
  Until,
  AbsNext,     // abstract weak next
  AbsUntil,
};

enum class Mode : std::uint8_t
{
  ltl,
  caret,
};

inline bool is_binary( Kind k )
{
  return k == Kind::And || k == Kind::Until || k == Kind::AbsUntil;
}

inline bool is_unary( Kind k )
{
  return k == Kind::Not || k == Kind::Next || k == Kind::AbsNext;
}

inline bool is_abstract( Kind k )
{
  return k == Kind::AbsNext || k == Kind::AbsUntil;
}

/*! \brief Immutable formula tree with structural equality.

  Nodes are shared; copying a Formula is a refcount bump. The structural
  hash is computed once at construction so equality checks on unequal
  trees usually exit early.
*/
class Formula
{
  struct Node
  {
    Kind kind;
    std::string name;
    std::shared_ptr<Node const> lhs;
    std::shared_ptr<Node const> rhs;
    std::size_t hash = 0;
    std::size_t size = 1;
  };

public:
  Formula() : node_( true_node() ) {}

  static Formula truth() { return Formula{}; }

  static Formula prop( std::string name )
  {
    if ( name.empty() )
      throw std::invalid_argument( "proposition name must be nonempty" );
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prop;
    n->hash = mix( static_cast<std::size_t>( Kind::Prop ), std::hash<std::string>{}( name ) );
    n->name = std::move( name );
    return Formula( std::move( n ) );
  }

  static Formula make_unary( Kind k, Formula const& arg )
  {
    if ( !is_unary( k ) )
      throw std::invalid_argument( "not a unary constructor" );
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = arg.node_;
    n->hash = mix( static_cast<std::size_t>( k ) * 0x9e3779b97f4a7c15ull, arg.hash() );
    n->size = 1 + arg.size();
    return Formula( std::move( n ) );
  }

  static Formula make_binary( Kind k, Formula const& a, Formula const& b )
  {
    if ( !is_binary( k ) )
      throw std::invalid_argument( "not a binary constructor" );
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = a.node_;
    n->rhs = b.node_;
    n->hash = mix( mix( static_cast<std::size_t>( k ) * 0x9e3779b97f4a7c15ull, a.hash() ), b.hash() );
    n->size = 1 + a.size() + b.size();
    return Formula( std::move( n ) );
  }

  Kind kind() const { return node_->kind; }
  std::string const& name() const { return node_->name; }
  std::size_t hash() const { return node_->hash; }

  /// Node count of the core tree.
  std::size_t size() const { return node_->size; }

  Formula lhs() const
  {
    if ( !node_->lhs )
      throw std::logic_error( "formula has no operand" );
    return Formula( node_->lhs );
  }

  Formula rhs() const
  {
    if ( !node_->rhs )
      throw std::logic_error( "formula has no second operand" );
    return Formula( node_->rhs );
  }

  /// Operand of a unary node.
  Formula arg() const { return lhs(); }

  bool is( Kind k ) const { return node_->kind == k; }

  friend bool operator==( Formula const& a, Formula const& b ) { return equal( a.node_.get(), b.node_.get() ); }
  friend bool operator!=( Formula const& a, Formula const& b ) { return !( a == b ); }

  /// Total structural order: by size, then kind, then name, then children.
  friend bool operator<( Formula const& a, Formula const& b ) { return compare( a.node_.get(), b.node_.get() ) < 0; }

private:
  explicit Formula( std::shared_ptr<Node const> n ) : node_( std::move( n ) ) {}

  static std::shared_ptr<Node const> const& true_node()
  {
    static std::shared_ptr<Node const> const t = [] {
      auto n = std::make_shared<Node>();
      n->kind = Kind::True;
      n->hash = 0x51ed270b;
      return std::shared_ptr<Node const>( std::move( n ) );
    }();
    return t;
  }

  static std::size_t mix( std::size_t seed, std::size_t v )
  {
    return seed ^ ( v + 0x9e3779b97f4a7c15ull + ( seed << 6 ) + ( seed >> 2 ) );
  }

  static bool equal( Node const* a, Node const* b )
  {
    while ( true )
    {
      if ( a == b )
        return true;
      if ( a->hash != b->hash || a->size != b->size || a->kind != b->kind )
        return false;
      switch ( a->kind )
      {
      case Kind::True:
        return true;
      case Kind::Prop:
        return a->name == b->name;
      case Kind::Not:
      case Kind::Next:
      case Kind::AbsNext:
        a = a->lhs.get();
        b = b->lhs.get();
        break;
      default:
        if ( !equal( a->lhs.get(), b->lhs.get() ) )
          return false;
        a = a->rhs.get();
        b = b->rhs.get();
        break;
      }
    }
  }

  static int compare( Node const* a, Node const* b )
  {
    if ( a == b )
      return 0;
    if ( a->size != b->size )
      return a->size < b->size ? -1 : 1;
    if ( a->kind != b->kind )
      return a->kind < b->kind ? -1 : 1;
    switch ( a->kind )
    {
    case Kind::True:
      return 0;
    case Kind::Prop:
      return a->name.compare( b->name ) < 0 ? -1 : ( a->name == b->name ? 0 : 1 );
    case Kind::Not:
    case Kind::Next:
    case Kind::AbsNext:
      return compare( a->lhs.get(), b->lhs.get() );
    default:
      if ( int c = compare( a->lhs.get(), b->lhs.get() ); c != 0 )
        return c;
      return compare( a->rhs.get(), b->rhs.get() );
    }
  }

  std::shared_ptr<Node const> node_;
};

struct FormulaHash
{
  std::size_t operator()( Formula const& f ) const { return f.hash(); }
};

using FormulaSet = std::set<Formula>;

template<class T>
using FormulaMap = std::unordered_map<Formula, T, FormulaHash>;

/* core builders and the sugar layer */

inline Formula truth() { return Formula::truth(); }
inline Formula prop( std::string name ) { return Formula::prop( std::move( name ) ); }
inline Formula neg( Formula const& f ) { return Formula::make_unary( Kind::Not, f ); }
inline Formula conj( Formula const& a, Formula const& b ) { return Formula::make_binary( Kind::And, a, b ); }
inline Formula weak_next( Formula const& f ) { return Formula::make_unary( Kind::Next, f ); }
inline Formula until( Formula const& a, Formula const& b ) { return Formula::make_binary( Kind::Until, a, b ); }
inline Formula abs_weak_next( Formula const& f ) { return Formula::make_unary( Kind::AbsNext, f ); }
inline Formula abs_until( Formula const& a, Formula const& b ) { return Formula::make_binary( Kind::AbsUntil, a, b ); }

inline Formula falsity() { return neg( truth() ); }
inline Formula disj( Formula const& a, Formula const& b ) { return neg( conj( neg( a ), neg( b ) ) ); }
inline Formula implies( Formula const& a, Formula const& b ) { return disj( neg( a ), b ); }
inline Formula iff( Formula const& a, Formula const& b ) { return conj( implies( a, b ), implies( b, a ) ); }
inline Formula eventually( Formula const& f ) { return until( truth(), f ); }
inline Formula always( Formula const& f ) { return neg( eventually( neg( f ) ) ); }
inline Formula strong_next( Formula const& f ) { return neg( weak_next( neg( f ) ) ); }
inline Formula abs_eventually( Formula const& f ) { return abs_until( truth(), f ); }
inline Formula abs_always( Formula const& f ) { return neg( abs_eventually( neg( f ) ) ); }
inline Formula abs_strong_next( Formula const& f ) { return neg( abs_weak_next( neg( f ) ) ); }

/// Complement used when pairing closure members: strips one negation or adds one.
inline Formula complement( Formula const& f )
{
  return f.is( Kind::Not ) ? f.arg() : neg( f );
}

inline std::size_t formula_size( Formula const& f ) { return f.size(); }

/// Distinct subformulas, children before parents.
inline std::vector<Formula> subformulas( Formula const& root )
{
  std::vector<Formula> order;
  FormulaMap<bool> seen;
  std::function<void( Formula const& )> visit = [&]( Formula const& f ) {
    if ( seen.count( f ) )
      return;
    if ( is_unary( f.kind() ) )
      visit( f.arg() );
    else if ( is_binary( f.kind() ) )
    {
      visit( f.lhs() );
      visit( f.rhs() );
    }
    seen.emplace( f, true );
    order.push_back( f );
  };
  visit( root );
  return order;
}

inline bool has_abstract_operator( Formula const& f )
{
  if ( is_abstract( f.kind() ) )
    return true;
  if ( is_unary( f.kind() ) )
    return has_abstract_operator( f.arg() );
  if ( is_binary( f.kind() ) )
    return has_abstract_operator( f.lhs() ) || has_abstract_operator( f.rhs() );
  return false;
}

/// Proposition names occurring in f, sorted.
inline std::vector<std::string> propositions( Formula const& f )
{
  std::set<std::string> names;
  for ( auto const& g : subformulas( f ) )
    if ( g.is( Kind::Prop ) )
      names.insert( g.name() );
  return { names.begin(), names.end() };
}

/// Simultaneous replacement of propositions by formulas.
inline Formula substitute( Formula const& f, std::unordered_map<std::string, Formula> const& binding )
{
  switch ( f.kind() )
  {
  case Kind::True:
    return f;
  case Kind::Prop:
  {
    auto it = binding.find( f.name() );
    return it == binding.end() ? f : it->second;
  }
  case Kind::Not:
  case Kind::Next:
  case Kind::AbsNext:
    return Formula::make_unary( f.kind(), substitute( f.arg(), binding ) );
  default:
    return Formula::make_binary( f.kind(), substitute( f.lhs(), binding ), substitute( f.rhs(), binding ) );
  }
}

/// Fully parenthesized concrete syntax; reparses to an equal tree.
inline std::string to_string( Formula const& f )
{
  switch ( f.kind() )
  {
  case Kind::True:
    return "true";
  case Kind::Prop:
    return f.name();
  case Kind::Not:
    return "!(" + to_string( f.arg() ) + ")";
  case Kind::Next:
    return "X " + to_string( f.arg() );
  case Kind::AbsNext:
    return "Xa " + to_string( f.arg() );
  case Kind::And:
    return "(" + to_string( f.lhs() ) + " & " + to_string( f.rhs() ) + ")";
  case Kind::Until:
    return "(" + to_string( f.lhs() ) + " U " + to_string( f.rhs() ) + ")";
  case Kind::AbsUntil:
    return "(" + to_string( f.lhs() ) + " Ua " + to_string( f.rhs() ) + ")";
  }
  return {};
}

inline std::string print_formula( Formula const& f ) { return to_string( f ); }

} // namespace ltlkit

template<>
struct std::hash<ltlkit::Formula>
{
  std::size_t operator()( ltlkit::Formula const& f ) const { return f.hash(); }
};
