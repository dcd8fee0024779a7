pub(crate) fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ipow(base: i64, exp: u32) -> i64 {
    base.checked_pow(exp).expect("integer overflow in power")
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub(crate) fn check_odd_prime(p: i64) -> crate::Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(crate::Error::Invalid(format!("p = {p} is not an odd prime")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<i64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(9).is_err());
        assert!(check_odd_prime(13).is_ok());
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(divisors(1), vec![1]);
    }
}
