use crate::error::{Error, Result};

/// Min-cost transportation plan maintained incrementally by successive shortest
/// augmenting paths with node potentials.
///
/// Each [`TransportFlow::add_car`] routes one more unit along a shortest residual
/// path from the new car to a garage with spare capacity, so after every call the
/// current assignment is a minimum-cost assignment of all cars added so far and
/// exactly one garage's load has grown by one.
#[derive(Debug, Clone)]
pub struct TransportFlow {
    capacities: Vec<u32>,
    /// `cost[car][garage]`
    cost: Vec<Vec<f64>>,
    assigned: Vec<usize>,
    load: Vec<u32>,
    cars_at: Vec<Vec<usize>>,
    pot_car: Vec<f64>,
    pot_garage: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Node {
    Car(usize),
    Garage(usize),
}

impl TransportFlow {
    pub fn new(capacities: Vec<u32>) -> Self {
        let m = capacities.len();
        TransportFlow {
            capacities,
            cost: Vec::new(),
            assigned: Vec::new(),
            load: vec![0; m],
            cars_at: vec![Vec::new(); m],
            pot_car: Vec::new(),
            pot_garage: vec![0.0; m],
        }
    }

    pub fn garage_count(&self) -> usize {
        self.capacities.len()
    }

    pub fn car_count(&self) -> usize {
        self.assigned.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assigned
    }

    pub fn load(&self) -> &[u32] {
        &self.load
    }

    pub fn residual(&self) -> Vec<u32> {
        self.capacities
            .iter()
            .zip(&self.load)
            .map(|(c, l)| c - l)
            .collect()
    }

    pub fn car_cost(&self, car: usize) -> f64 {
        self.cost[car][self.assigned[car]]
    }

    pub fn total_cost(&self) -> f64 {
        (0..self.car_count()).map(|c| self.car_cost(c)).sum()
    }

    /// Adds a car with the given per-garage costs and returns the garage whose
    /// load increased. Ties between equally short paths go to the lowest garage.
    pub fn add_car(&mut self, costs: Vec<f64>) -> Result<usize> {
        let m = self.garage_count();
        if costs.len() != m {
            return Err(Error::Input(format!(
                "{} costs for {m} garages",
                costs.len()
            )));
        }
        if !self.load.iter().zip(&self.capacities).any(|(l, c)| l < c) {
            return Err(Error::Input("no garage has spare capacity".into()));
        }
        let new = self.assigned.len();
        let start_pot = (0..m)
            .map(|g| self.pot_garage[g] - costs[g])
            .fold(f64::NEG_INFINITY, f64::max);
        self.cost.push(costs);
        self.pot_car.push(start_pot);
        self.assigned.push(usize::MAX);

        let n = new + 1;
        let mut dist_car = vec![f64::INFINITY; n];
        let mut dist_garage = vec![f64::INFINITY; m];
        let mut done_car = vec![false; n];
        let mut done_garage = vec![false; m];
        let mut prev_of_garage = vec![usize::MAX; m];
        let mut prev_of_car = vec![usize::MAX; n];
        dist_car[new] = 0.0;

        loop {
            let mut next: Option<(f64, Node)> = None;
            for (g, &d) in dist_garage.iter().enumerate() {
                if !done_garage[g] && d.is_finite() && next.is_none_or(|(b, _)| d < b) {
                    next = Some((d, Node::Garage(g)));
                }
            }
            for (c, &d) in dist_car.iter().enumerate() {
                if !done_car[c] && d.is_finite() && next.is_none_or(|(b, _)| d < b) {
                    next = Some((d, Node::Car(c)));
                }
            }
            let Some((d, node)) = next else { break };
            match node {
                Node::Car(c) => {
                    done_car[c] = true;
                    for g in 0..m {
                        if g == self.assigned[c] || done_garage[g] {
                            continue;
                        }
                        let reduced =
                            (self.cost[c][g] + self.pot_car[c] - self.pot_garage[g]).max(0.0);
                        if d + reduced < dist_garage[g] {
                            dist_garage[g] = d + reduced;
                            prev_of_garage[g] = c;
                        }
                    }
                }
                Node::Garage(g) => {
                    done_garage[g] = true;
                    for &c in &self.cars_at[g] {
                        if done_car[c] {
                            continue;
                        }
                        let reduced =
                            (-self.cost[c][g] + self.pot_garage[g] - self.pot_car[c]).max(0.0);
                        if d + reduced < dist_car[c] {
                            dist_car[c] = d + reduced;
                            prev_of_car[c] = g;
                        }
                    }
                }
            }
        }

        let mut target: Option<usize> = None;
        for g in 0..m {
            if self.load[g] < self.capacities[g]
                && dist_garage[g].is_finite()
                && target.is_none_or(|t| dist_garage[g] < dist_garage[t])
            {
                target = Some(g);
            }
        }
        let target = target.ok_or_else(|| Error::Invariant("no augmenting path found".into()))?;
        let limit = dist_garage[target];

        for (p, &d) in self.pot_car.iter_mut().zip(&dist_car) {
            *p += d.min(limit);
        }
        for (p, &d) in self.pot_garage.iter_mut().zip(&dist_garage) {
            *p += d.min(limit);
        }

        // walk the alternating path back, moving each car one garage along
        let mut g = target;
        loop {
            let c = prev_of_garage[g];
            let old = self.assigned[c];
            self.assigned[c] = g;
            self.cars_at[g].push(c);
            if old == usize::MAX {
                break;
            }
            let slot = self.cars_at[old]
                .iter()
                .position(|&x| x == c)
                .expect("car listed at its garage");
            self.cars_at[old].remove(slot);
            g = prev_of_car[c];
            debug_assert_eq!(g, old);
        }
        self.load[target] += 1;
        Ok(target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reroutes_an_earlier_car() {
        // garages at 0 and 1; cars at 0.4 and 0.4
        let mut f = TransportFlow::new(vec![1, 1]);
        assert_eq!(f.add_car(vec![0.4, 0.6]).unwrap(), 0);
        assert_eq!(f.add_car(vec![0.4, 0.6]).unwrap(), 1);
        assert!((f.total_cost() - 1.0).abs() < 1e-12);

        // second car much closer to g0: first car moves over
        let mut f = TransportFlow::new(vec![1, 1]);
        f.add_car(vec![1.0, 2.0]).unwrap();
        assert_eq!(f.add_car(vec![0.0, 10.0]).unwrap(), 1);
        assert_eq!(f.assignment(), &[1, 0]);
        assert_eq!(f.total_cost(), 2.0);
    }

    #[test]
    fn full_network_is_an_error() {
        let mut f = TransportFlow::new(vec![1]);
        f.add_car(vec![1.0]).unwrap();
        assert!(f.add_car(vec![1.0]).is_err());
    }
}
