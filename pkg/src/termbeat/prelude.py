"""The shipped base module, implicitly loaded into every program."""

PRELUDE_NAME = "Prelude"

PRELUDE_TEXT = """module Prelude where

foldr f z [] = z ;
foldr f z (x : xs) = f x (foldr f z xs) ;

xs ++ ys = foldr (:) ys xs ;

map f xs = foldr (\\x ys -> f x : ys) [] xs ;

tail (x : xs) = xs ;

cycle xs = xs ++ cycle xs ;

zipWith f (x : xs) (y : ys) = f x y : zipWith f xs ys ;
zipWith f xs ys = [] ;

fix f = f (fix f) ;

(Wait a : xs) =:= (Wait b : ys) =
  mergeWait (a<b) (a-b) a xs b ys ;
(Wait a : xs) =:= (y : ys) =
  y : ((Wait a : xs) =:= ys) ;
(x : xs) =:= ys  =  x : (xs =:= ys) ;
[] =:= ys  =  ys ;

mergeWait _eq 0 a xs _b ys =
  Wait a : (xs =:= ys) ;
mergeWait True d a xs _b ys =
  Wait a : (xs =:= (Wait (negate d) : ys)) ;
mergeWait False d _a xs b ys =
  Wait b : ((Wait d : xs) =:= ys) ;
"""
