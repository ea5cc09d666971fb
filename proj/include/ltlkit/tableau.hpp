#pragma once

#include "closure.hpp"
#include "formula.hpp"
#include "trace.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ltlkit
{

enum class StructureClass
{
  gen,
  fin,
  inf,
};

inline std::string_view class_name( StructureClass c )
{
  switch ( c )
  {
  case StructureClass::gen:
    return "gen";
  case StructureClass::fin:
    return "fin";
  case StructureClass::inf:
    return "inf";
  }
  return "gen";
}

inline StructureClass parse_structure_class( std::string_view s )
{
  if ( s == "gen" )
    return StructureClass::gen;
  if ( s == "fin" )
    return StructureClass::fin;
  if ( s == "inf" )
    return StructureClass::inf;
  throw std::invalid_argument( "unknown structure class '" + std::string( s ) + "'" );
}

class closure_too_large : public std::runtime_error
{
public:
  closure_too_large( std::size_t size, std::size_t cap )
    : std::runtime_error( "closure has " + std::to_string( size ) + " members, cap is " + std::to_string( cap ) ),
      size_( size ), cap_( cap )
  {
  }

  std::size_t size() const { return size_; }
  std::size_t cap() const { return cap_; }

private:
  std::size_t size_;
  std::size_t cap_;
};

struct TableauOptions
{
  /// Cap on the complementary pairs {psi, !psi} of the closure.
  std::size_t closure_cap = 24;
};

/// An atom is a bit-vector over the unsigned closure members; the
/// negated members are implied by absence.
using Atom = std::uint64_t;

/// Order by bit-vector read from member 0 upward.
inline bool atom_less( Atom a, Atom b )
{
  Atom const d = a ^ b;
  if ( d == 0 )
    return false;
  return ( a & ( d & ( ~d + 1 ) ) ) == 0;
}

struct ChainWitness
{
  /// Terminal paths keep their atoms in `prefix` and leave `loop` empty.
  std::vector<Atom> prefix;
  std::vector<Atom> loop;

  bool terminal() const { return loop.empty(); }
};

using Model = std::variant<FiniteTrace, LassoTrace>;

struct SatResult
{
  bool satisfiable = false;
  std::optional<ChainWitness> chain;
  std::optional<Model> model;
};

/*! \brief Atom space, transition graph, and chain search for one formula.

  Consistency of a member set is checked by local rules instead of proof
  search: maximality (by construction), the conjunction rule, the until
  unfolding `a U b` iff `b` or (`a` and `N(a U b)`), saturation of every
  weak next at a terminal atom, and the class constraint. Atoms without
  `X false` that end up with no successor are pruned, iteratively.
*/
class Tableau
{
public:
  Tableau( Formula const& f, StructureClass cls, TableauOptions const& opts = {} )
    : formula_( f ), class_( cls ), closure_( closure( f, Mode::ltl ) )
  {
    for ( auto const& g : closure_.primary() )
      if ( !g.is( Kind::Not ) )
        base_.push_back( g );
    std::size_t const cap = std::min<std::size_t>( opts.closure_cap, 64 );
    if ( base_.size() > cap )
      throw closure_too_large( base_.size(), opts.closure_cap );
    for ( std::size_t i = 0; i < base_.size(); ++i )
      index_.emplace( base_[i], static_cast<int>( i ) );

    terminal_bit_ = bit_of( weak_next( falsity() ) );
    final_ahead_bit_ = bit_of( final_ahead() );
    enumerate();
    build_graph();
  }

  Formula const& formula() const { return formula_; }
  StructureClass structure_class() const { return class_; }
  ClosureSet const& closure_set() const { return closure_; }

  /// Unsigned closure members; bit i of an atom decides base()[i].
  std::vector<Formula> const& base() const { return base_; }

  /// Every locally consistent atom of the class, in atom_less order.
  std::vector<Atom> const& atoms() const { return atoms_; }

  /// Successor lists (indices into atoms()), before pruning.
  std::vector<std::vector<int>> const& successors() const { return succ_; }

  bool alive( std::size_t i ) const { return alive_[i]; }
  bool terminal( Atom a ) const { return ( a >> terminal_bit_ ) & 1; }

  /// Truth of a closure member in an atom.
  bool holds( Atom a, Formula const& g ) const
  {
    bool positive = true;
    Formula h = g;
    while ( h.is( Kind::Not ) )
    {
      positive = !positive;
      h = h.arg();
    }
    auto it = index_.find( h );
    if ( it == index_.end() )
      throw std::invalid_argument( "formula is not in the closure: " + to_string( g ) );
    return ( ( a >> it->second ) & 1 ) == positive;
  }

  /// Primitive propositions of the atom, the state label in extracted models.
  Valuation label( Atom a ) const
  {
    Valuation v;
    for ( std::size_t i = 0; i < base_.size(); ++i )
      if ( base_[i].is( Kind::Prop ) && ( ( a >> i ) & 1 ) )
        v.insert( base_[i].name() );
    return v;
  }

  std::optional<ChainWitness> find_terminal_chain() const
  {
    std::vector<int> sources;
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
      if ( alive_[i] && holds( atoms_[i], formula_ ) )
        sources.push_back( static_cast<int>( i ) );

    auto path = bfs( sources, [&]( int v ) { return terminal( atoms_[v] ); }, [&]( int ) { return true; } );
    if ( !path )
      return std::nullopt;
    ChainWitness w;
    for ( int v : *path )
      w.prefix.push_back( atoms_[v] );
    return w;
  }

  std::optional<ChainWitness> find_lasso_chain() const
  {
    auto usable = [&]( int v ) { return alive_[v] && !terminal( atoms_[v] ); };
    std::vector<int> sources;
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
      if ( usable( static_cast<int>( i ) ) && holds( atoms_[i], formula_ ) )
        sources.push_back( static_cast<int>( i ) );
    if ( sources.empty() )
      return std::nullopt;

    // breadth-first distances from the sources within usable atoms
    std::vector<int> dist( atoms_.size(), -1 );
    std::deque<int> queue;
    for ( int s : sources )
    {
      dist[s] = 0;
      queue.push_back( s );
    }
    while ( !queue.empty() )
    {
      int v = queue.front();
      queue.pop_front();
      for ( int w : succ_[v] )
        if ( usable( w ) && dist[w] < 0 )
        {
          dist[w] = dist[v] + 1;
          queue.push_back( w );
        }
    }

    auto const sccs = components( [&]( int v ) { return dist[v] >= 0; } );

    std::optional<int> best_entry;
    std::vector<int> const* best_scc = nullptr;
    for ( auto const& scc : sccs )
    {
      if ( !nontrivial( scc ) || !fulfilling( scc ) )
        continue;
      int entry = scc.front();
      for ( int v : scc )
        if ( dist[v] < dist[entry] || ( dist[v] == dist[entry] && v < entry ) )
          entry = v;
      if ( !best_entry || dist[entry] < dist[*best_entry] || ( dist[entry] == dist[*best_entry] && entry < *best_entry ) )
      {
        best_entry = entry;
        best_scc = &scc;
      }
    }
    if ( !best_entry )
      return std::nullopt;

    std::vector<char> in_scc( atoms_.size(), 0 );
    for ( int v : *best_scc )
      in_scc[v] = 1;
    auto inside = [&]( int v ) { return in_scc[v] != 0; };

    ChainWitness w;
    auto prefix = bfs( sources, [&]( int v ) { return v == *best_entry; }, usable );
    for ( std::size_t k = 0; k + 1 < prefix->size(); ++k )
      w.prefix.push_back( atoms_[( *prefix )[k]] );

    // stitch a loop from the entry through one fulfilling atom per until
    std::vector<int> loop{ *best_entry };
    int current = *best_entry;
    for ( auto const& target : fulfillment_targets( *best_scc ) )
    {
      if ( target == current )
        continue;
      auto seg = bfs( { current }, [&]( int v ) { return v == target; }, inside );
      loop.insert( loop.end(), seg->begin() + 1, seg->end() );
      current = target;
    }
    auto back = bfs_nonempty( current, *best_entry, inside );
    loop.insert( loop.end(), back.begin() + 1, back.end() - 1 );

    for ( int v : loop )
      w.loop.push_back( atoms_[v] );
    return w;
  }

  Model extract_model( ChainWitness const& w ) const
  {
    std::vector<Valuation> prefix, loop;
    for ( Atom a : w.prefix )
      prefix.push_back( label( a ) );
    if ( w.terminal() )
      return FiniteTrace( std::move( prefix ) );
    for ( Atom a : w.loop )
      loop.push_back( label( a ) );
    return LassoTrace( std::move( prefix ), std::move( loop ) );
  }

  SatResult decide() const
  {
    std::optional<ChainWitness> w;
    if ( class_ != StructureClass::inf )
      w = find_terminal_chain();
    if ( !w && class_ != StructureClass::fin )
      w = find_lasso_chain();
    SatResult r;
    if ( w )
    {
      r.satisfiable = true;
      r.model = extract_model( *w );
      r.chain = std::move( w );
    }
    return r;
  }

private:
  int bit_of( Formula const& g ) const { return index_.at( g ); }

  std::pair<int, bool> literal( Formula const& g ) const
  {
    bool positive = true;
    Formula h = g;
    while ( h.is( Kind::Not ) )
    {
      positive = !positive;
      h = h.arg();
    }
    return { index_.at( h ), positive };
  }

  bool lit_true( Atom a, std::pair<int, bool> lit ) const { return ( ( a >> lit.first ) & 1 ) == lit.second; }

  void enumerate()
  {
    std::vector<int> free;
    Atom next_mask = 0;
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      auto k = base_[i].kind();
      if ( k == Kind::Prop || k == Kind::Next )
        free.push_back( static_cast<int>( i ) );
      if ( k == Kind::Next )
        next_mask |= Atom{ 1 } << i;
    }

    struct Rule
    {
      int bit;
      Kind kind;
      std::pair<int, bool> a, b;
      int strong_next_neg = -1; // bit of X !(a U b); N(a U b) holds when clear
    };
    std::vector<Rule> rules;
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      auto const& g = base_[i];
      if ( g.is( Kind::And ) )
        rules.push_back( { static_cast<int>( i ), Kind::And, literal( g.lhs() ), literal( g.rhs() ) } );
      else if ( g.is( Kind::Until ) )
        rules.push_back( { static_cast<int>( i ), Kind::Until, literal( g.lhs() ), literal( g.rhs() ),
                           bit_of( weak_next( neg( g ) ) ) } );
    }
    int const true_bit = bit_of( truth() );

    std::uint64_t const count = std::uint64_t{ 1 } << free.size();
    for ( std::uint64_t assignment = 0; assignment < count; ++assignment )
    {
      Atom a = Atom{ 1 } << true_bit;
      for ( std::size_t k = 0; k < free.size(); ++k )
        if ( ( assignment >> k ) & 1 )
          a |= Atom{ 1 } << free[k];
      if ( terminal( a ) && ( a & next_mask ) != next_mask )
        continue;
      for ( auto const& r : rules )
      {
        bool v;
        if ( r.kind == Kind::And )
          v = lit_true( a, r.a ) && lit_true( a, r.b );
        else
          v = lit_true( a, r.b ) || ( lit_true( a, r.a ) && !( ( a >> r.strong_next_neg ) & 1 ) );
        if ( v )
          a |= Atom{ 1 } << r.bit;
      }
      if ( class_ == StructureClass::fin && !( ( a >> final_ahead_bit_ ) & 1 ) )
        continue;
      if ( class_ == StructureClass::inf && terminal( a ) )
        continue;
      atoms_.push_back( a );
    }
    std::sort( atoms_.begin(), atoms_.end(), atom_less );
  }

  void build_graph()
  {
    // each weak next X g fixes the truth of g in every successor
    std::vector<std::pair<int, std::pair<int, bool>>> obligations;
    Atom key_mask = 0;
    for ( std::size_t i = 0; i < base_.size(); ++i )
      if ( base_[i].is( Kind::Next ) )
      {
        auto lit = literal( base_[i].arg() );
        obligations.push_back( { static_cast<int>( i ), lit } );
        key_mask |= Atom{ 1 } << lit.first;
      }

    std::unordered_map<Atom, std::vector<int>> by_key;
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
      by_key[atoms_[i] & key_mask].push_back( static_cast<int>( i ) );

    succ_.assign( atoms_.size(), {} );
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
    {
      Atom const v = atoms_[i];
      if ( terminal( v ) )
        continue;
      Atom required = 0, fixed = 0;
      bool conflict = false;
      for ( auto const& [next_bit, lit] : obligations )
      {
        bool const want = ( ( v >> next_bit ) & 1 ) ? lit.second : !lit.second;
        Atom const bit = Atom{ 1 } << lit.first;
        if ( fixed & bit )
        {
          if ( bool( required & bit ) != want )
            conflict = true;
        }
        fixed |= bit;
        if ( want )
          required |= bit;
      }
      if ( conflict )
        continue;
      if ( auto it = by_key.find( required ); it != by_key.end() )
        succ_[i] = it->second;
    }

    // prune non-terminal atoms left without successors
    alive_.assign( atoms_.size(), 1 );
    std::vector<std::vector<int>> pred( atoms_.size() );
    std::vector<std::size_t> out( atoms_.size(), 0 );
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
    {
      out[i] = succ_[i].size();
      for ( int w : succ_[i] )
        pred[w].push_back( static_cast<int>( i ) );
    }
    std::deque<int> dead;
    for ( std::size_t i = 0; i < atoms_.size(); ++i )
      if ( !terminal( atoms_[i] ) && out[i] == 0 )
        dead.push_back( static_cast<int>( i ) );
    while ( !dead.empty() )
    {
      int v = dead.front();
      dead.pop_front();
      if ( !alive_[v] )
        continue;
      alive_[v] = 0;
      for ( int u : pred[v] )
        if ( alive_[u] && --out[u] == 0 )
          dead.push_back( u );
    }
  }

  /// Shortest path from any source to an atom accepted by `goal`, moving
  /// only through atoms accepted by `allowed`.
  template<class Goal, class Allowed>
  std::optional<std::vector<int>> bfs( std::vector<int> const& sources, Goal goal, Allowed allowed ) const
  {
    std::vector<int> parent( atoms_.size(), -2 );
    std::deque<int> queue;
    for ( int s : sources )
      if ( parent[s] == -2 )
      {
        parent[s] = -1;
        queue.push_back( s );
      }
    while ( !queue.empty() )
    {
      int v = queue.front();
      queue.pop_front();
      if ( goal( v ) )
      {
        std::vector<int> path;
        for ( int x = v; x >= 0; x = parent[x] )
          path.push_back( x );
        std::reverse( path.begin(), path.end() );
        return path;
      }
      for ( int w : succ_[v] )
        if ( alive_[w] && allowed( w ) && parent[w] == -2 )
        {
          parent[w] = v;
          queue.push_back( w );
        }
    }
    return std::nullopt;
  }

  /// Path from `from` to `to` of at least one edge, inside `allowed`.
  template<class Allowed>
  std::vector<int> bfs_nonempty( int from, int to, Allowed allowed ) const
  {
    std::vector<int> best;
    for ( int w : succ_[from] )
    {
      if ( !alive_[w] || !allowed( w ) )
        continue;
      auto p = bfs( { w }, [&]( int v ) { return v == to; }, allowed );
      if ( p && ( best.empty() || p->size() + 1 < best.size() ) )
      {
        best = { from };
        best.insert( best.end(), p->begin(), p->end() );
      }
    }
    if ( best.empty() )
      throw std::logic_error( "no cycle through a component entry" );
    return best;
  }

  /// Strongly connected components of the alive atoms selected by `keep`.
  template<class Keep>
  std::vector<std::vector<int>> components( Keep keep ) const
  {
    int const n = static_cast<int>( atoms_.size() );
    std::vector<int> index( n, -1 ), low( n, 0 );
    std::vector<char> on_stack( n, 0 );
    std::vector<int> stack;
    std::vector<std::vector<int>> result;
    int counter = 0;

    // iterative Tarjan
    for ( int root = 0; root < n; ++root )
    {
      if ( !keep( root ) || !alive_[root] || index[root] >= 0 )
        continue;
      std::vector<std::pair<int, std::size_t>> frames{ { root, 0 } };
      index[root] = low[root] = counter++;
      stack.push_back( root );
      on_stack[root] = 1;
      while ( !frames.empty() )
      {
        auto& [v, k] = frames.back();
        if ( k < succ_[v].size() )
        {
          int w = succ_[v][k++];
          if ( !alive_[w] || !keep( w ) || terminal( atoms_[w] ) )
            continue;
          if ( index[w] < 0 )
          {
            index[w] = low[w] = counter++;
            stack.push_back( w );
            on_stack[w] = 1;
            frames.push_back( { w, 0 } );
          }
          else if ( on_stack[w] )
            low[v] = std::min( low[v], index[w] );
          continue;
        }
        int const done = v;
        frames.pop_back();
        if ( !frames.empty() )
          low[frames.back().first] = std::min( low[frames.back().first], low[done] );
        if ( low[done] == index[done] )
        {
          std::vector<int> scc;
          int x;
          do
          {
            x = stack.back();
            stack.pop_back();
            on_stack[x] = 0;
            scc.push_back( x );
          } while ( x != done );
          std::sort( scc.begin(), scc.end() );
          result.push_back( std::move( scc ) );
        }
      }
    }
    return result;
  }

  bool nontrivial( std::vector<int> const& scc ) const
  {
    if ( scc.size() > 1 )
      return true;
    auto const& s = succ_[scc.front()];
    return std::find( s.begin(), s.end(), scc.front() ) != s.end();
  }

  bool fulfilling( std::vector<int> const& scc ) const
  {
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      if ( !base_[i].is( Kind::Until ) )
        continue;
      bool present = false, fulfilled = false;
      auto const rhs = literal( base_[i].rhs() );
      for ( int v : scc )
      {
        present |= ( ( atoms_[v] >> i ) & 1 ) != 0;
        fulfilled |= lit_true( atoms_[v], rhs );
      }
      if ( present && !fulfilled )
        return false;
    }
    return true;
  }

  /// For each until present in the component, the first atom fulfilling it.
  std::vector<int> fulfillment_targets( std::vector<int> const& scc ) const
  {
    std::vector<int> targets;
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      if ( !base_[i].is( Kind::Until ) )
        continue;
      bool present = false;
      for ( int v : scc )
        present |= ( ( atoms_[v] >> i ) & 1 ) != 0;
      if ( !present )
        continue;
      auto const rhs = literal( base_[i].rhs() );
      for ( int v : scc )
        if ( lit_true( atoms_[v], rhs ) )
        {
          targets.push_back( v );
          break;
        }
    }
    return targets;
  }

  Formula formula_;
  StructureClass class_;
  ClosureSet closure_;
  std::vector<Formula> base_;
  FormulaMap<int> index_;
  int terminal_bit_ = 0;
  int final_ahead_bit_ = 0;
  std::vector<Atom> atoms_;
  std::vector<std::vector<int>> succ_;
  std::vector<char> alive_;
};

inline std::vector<Atom> enumerate_atoms( Formula const& f, StructureClass cls, TableauOptions const& opts = {} )
{
  return Tableau( f, cls, opts ).atoms();
}

inline std::vector<Atom> enumerate_atoms( ClosureSet const& c, StructureClass cls, TableauOptions const& opts = {} )
{
  if ( c.mode() != Mode::ltl )
    throw std::invalid_argument( "enumerate_atoms: closure must be built in ltl mode" );
  return Tableau( c.origin(), cls, opts ).atoms();
}

inline SatResult decide_sat( Formula const& f, StructureClass cls, TableauOptions const& opts = {} )
{
  if ( has_abstract_operator( f ) )
    throw std::invalid_argument( "decide_sat: abstract operators are not supported" );
  return Tableau( f, cls, opts ).decide();
}

/// Valid iff the negation is unsatisfiable; a satisfiable negation's model is the countermodel.
inline SatResult find_countermodel( Formula const& f, StructureClass cls, TableauOptions const& opts = {} )
{
  return decide_sat( neg( f ), cls, opts );
}

inline bool decide_valid( Formula const& f, StructureClass cls, TableauOptions const& opts = {} )
{
  return !find_countermodel( f, cls, opts ).satisfiable;
}

} // namespace ltlkit
